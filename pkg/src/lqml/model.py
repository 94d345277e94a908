"""Validated blueprint representation.

A blueprint has exactly the features a quality metric needs: a metric IRI and
a result expression (its semantic representation), a label and description
(its human-readable description), and a match expression plus actions (its
pattern matching rule). Everything here is immutable once built, so blueprints
can be shared freely between threads and compared structurally.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import TYPE_CHECKING, Callable, Iterator, Optional, Union

from .errors import DuplicateFunctionError, ValidationError, Violation
from .terms import BNode, IRI, Literal, Term

if TYPE_CHECKING:
    from .parser import Clause, RawBlueprintAst


class Position(Enum):
    SUBJECT = "?s"
    PREDICATE = "?p"
    OBJECT = "?o"

    @property
    def index(self) -> int:
        return _POSITION_INDEX[self]


_POSITION_INDEX = {Position.SUBJECT: 0, Position.PREDICATE: 1, Position.OBJECT: 2}


class Operator(Enum):
    AND = "&"
    OR = "|"


@dataclass(frozen=True)
class TypeOf:
    position: Position
    class_iri: str


@dataclass(frozen=True)
class SubjectEquals:
    iri: str


@dataclass(frozen=True)
class PredicateEquals:
    iri: str


@dataclass(frozen=True)
class ObjectEqualsIri:
    iri: str


@dataclass(frozen=True)
class ObjectEqualsLiteral:
    """``?o == "text"`` keeps a ``str``; ``?o == 4.5`` keeps a ``Decimal``."""

    value: Union[str, Decimal]


@dataclass(frozen=True)
class FunctionCall:
    name: str
    args: tuple[Position, ...] = ()


Condition = Union[TypeOf, SubjectEquals, PredicateEquals, ObjectEqualsIri, ObjectEqualsLiteral, FunctionCall]


@dataclass(frozen=True)
class BoolOp:
    operator: Operator
    left: "ConditionExpr"
    right: "ConditionExpr"


ConditionExpr = Union[Condition, BoolOp]


def iter_conditions(expr: ConditionExpr) -> Iterator[Condition]:
    """Yield the leaves of ``expr`` left to right."""
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, BoolOp):
            stack.append(node.right)
            stack.append(node.left)
        else:
            yield node


@dataclass(frozen=True)
class Count:
    pass


@dataclass(frozen=True)
class Unique:
    position: Position


@dataclass(frozen=True)
class Map:
    key: Position
    value: Position


Action = Union[Count, Unique, Map]


class ResultTarget(Enum):
    COUNT = "count"
    UNIQUE = "unique"
    MAP = "map"


_ACTION_FOR_TARGET = {ResultTarget.COUNT: Count, ResultTarget.UNIQUE: Unique, ResultTarget.MAP: Map}


@dataclass(frozen=True)
class NumberLiteral:
    value: Decimal


@dataclass(frozen=True)
class ActionResult:
    target: ResultTarget


@dataclass(frozen=True)
class Ratio:
    numerator: Union[NumberLiteral, ActionResult]
    denominator: Union[NumberLiteral, ActionResult]


FinallyExpr = Union[NumberLiteral, ActionResult, Ratio]


def iter_action_results(expr: FinallyExpr) -> Iterator[ActionResult]:
    if isinstance(expr, Ratio):
        yield from iter_action_results(expr.numerator)
        yield from iter_action_results(expr.denominator)
    elif isinstance(expr, ActionResult):
        yield expr


@dataclass(frozen=True)
class Blueprint:
    name: str
    metric_uri: str
    label: str
    description: str
    match_expr: ConditionExpr
    actions: tuple[Action, ...]
    finally_expr: FinallyExpr

    def uses_type_index(self) -> bool:
        return any(isinstance(c, TypeOf) for c in iter_conditions(self.match_expr))


def feature_complete(b: Blueprint) -> bool:
    """True when every mandatory blueprint feature is present."""
    return all((
        bool(b.name),
        bool(b.metric_uri),
        b.label is not None,
        b.description is not None,
        b.match_expr is not None,
        len(b.actions) > 0,
        b.finally_expr is not None,
    ))


Predicate = Callable[..., bool]


class ExtensionRegistry:
    """Named boolean functions usable in ``match`` clauses.

    A predicate receives the selected triple terms positionally and must not
    have side effects. The registry is frozen once an assessment starts.
    """

    def __init__(self) -> None:
        self._entries: dict[str, Predicate] = {}
        self._frozen = False

    def register(self, name: str, predicate: Predicate) -> "ExtensionRegistry":
        if self._frozen:
            raise RuntimeError("registry is frozen; register functions before assessment")
        if not _IDENTIFIER.fullmatch(name):
            raise ValueError(f"{name!r} is not a valid function name")
        if name in self._entries:
            raise DuplicateFunctionError(f"function {name!r} is already registered")
        self._entries[name] = predicate
        return self

    def freeze(self) -> "ExtensionRegistry":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def __getitem__(self, name: str) -> Predicate:
        return self._entries[name]

    def __contains__(self, name: object) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> list[str]:
        return sorted(self._entries)


def register_function(registry: ExtensionRegistry, name: str, predicate: Predicate) -> ExtensionRegistry:
    return registry.register(name, predicate)


def _is_iri(term: Term) -> bool:
    return isinstance(term, IRI)


def _is_blank(term: Term) -> bool:
    return isinstance(term, BNode)


def _is_literal(term: Term) -> bool:
    return isinstance(term, Literal)


def _has_lang_tag(term: Term) -> bool:
    return isinstance(term, Literal) and bool(term.lang)


def default_registry() -> ExtensionRegistry:
    """A registry preloaded with term-kind tests: isIri, isBlank, isLiteral, hasLangTag."""
    registry = ExtensionRegistry()
    registry.register("isIri", _is_iri)
    registry.register("isBlank", _is_blank)
    registry.register("isLiteral", _is_literal)
    registry.register("hasLangTag", _has_lang_tag)
    return registry


_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ABSOLUTE_IRI = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>\"{}|^`\\]*")

CLAUSE_ORDER = ("metric", "label", "description", "match", "action", "finally")


def is_absolute_iri(text: str) -> bool:
    return bool(_ABSOLUTE_IRI.fullmatch(text))


def validate(ast: "RawBlueprintAst", registry: Optional[ExtensionRegistry] = None) -> Blueprint:
    """Check ``ast`` against the blueprint invariants and build a ``Blueprint``.

    Every violation found is reported in a single ``ValidationError``.
    """
    registry = registry if registry is not None else ExtensionRegistry()
    violations: list[Violation] = []

    def fail(kind: str, message: str, clause: Optional["Clause"] = None) -> None:
        line = clause.line if clause is not None else ast.line
        column = clause.column if clause is not None else ast.column
        violations.append(Violation(kind, message, line, column))

    if not ast.name or not _IDENTIFIER.fullmatch(ast.name):
        fail("missing-feature", "blueprint name must be an identifier")

    clauses: dict[str, "Clause"] = {}
    for clause in ast.clauses:
        if clause.keyword not in CLAUSE_ORDER:
            fail("unknown-clause", f"unknown clause {clause.keyword!r}", clause)
        elif clause.keyword in clauses:
            fail("duplicate-clause", f"clause {clause.keyword!r} appears more than once", clause)
        else:
            clauses[clause.keyword] = clause
    for keyword in CLAUSE_ORDER:
        if keyword not in clauses:
            fail("missing-feature", f"missing {keyword!r} clause")
    present = [c.keyword for c in ast.clauses if c.keyword in CLAUSE_ORDER]
    if not violations and present != list(CLAUSE_ORDER):
        fail("clause-order", "clauses must appear as " + ", ".join(CLAUSE_ORDER))

    metric = clauses.get("metric")
    if metric is not None and not is_absolute_iri(metric.body):
        fail("relative-iri", f"metric IRI <{metric.body}> is not absolute", metric)

    match = clauses.get("match")
    if match is not None:
        for cond in iter_conditions(match.body):
            iri = getattr(cond, "iri", None) or getattr(cond, "class_iri", None)
            if iri is not None and not is_absolute_iri(iri):
                fail("relative-iri", f"IRI <{iri}> in match clause is not absolute", match)
            if isinstance(cond, TypeOf) and cond.position is Position.PREDICATE:
                fail("invalid-condition", "typeof applies to ?s or ?o only", match)
            if isinstance(cond, FunctionCall) and cond.name not in registry:
                fail("unknown-function", f"function {cond.name!r} is not registered", match)

    action = clauses.get("action")
    declared: set[type] = set()
    if action is not None:
        if not action.body:
            fail("missing-feature", "action clause declares no action", action)
        for act in action.body:
            if type(act) in declared:
                fail("duplicate-action", f"action {_action_name(act)!r} is declared more than once", action)
            declared.add(type(act))
            if isinstance(act, Map) and act.key is act.value:
                fail("map-positions", "map needs two different positions", action)

    fin = clauses.get("finally")
    if fin is not None:
        for ref in iter_action_results(fin.body):
            if _ACTION_FOR_TARGET[ref.target] not in declared:
                fail(
                    "unbacked-actionresult",
                    f"actionresult({ref.target.value}) has no matching {ref.target.value} action",
                    fin,
                )

    if violations:
        raise ValidationError(violations, ast.name)

    return Blueprint(
        name=ast.name,
        metric_uri=clauses["metric"].body,
        label=clauses["label"].body,
        description=clauses["description"].body,
        match_expr=clauses["match"].body,
        actions=tuple(clauses["action"].body),
        finally_expr=clauses["finally"].body,
    )


def _action_name(action: Action) -> str:
    return {Count: "count", Unique: "unique", Map: "map"}[type(action)]
