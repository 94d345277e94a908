"""Streaming evaluation of blueprints over a triple source.

Every triple is read once per pass and offered to each blueprint; a blueprint
whose match expression holds updates its own accumulators. ``typeof`` needs to
know the classes of a term before any triple about that term is judged, so a
blueprint set using ``typeof`` is evaluated in two passes: the first collects
``rdf:type`` statements into a ``TypeIndex``, the second does the matching.
Results therefore never depend on the order of triples in the input.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import DivisionByZeroError, LqmlError
from .model import (
    Action,
    ActionResult,
    Blueprint,
    BoolOp,
    ConditionExpr,
    Count,
    ExtensionRegistry,
    FinallyExpr,
    FunctionCall,
    Map,
    NumberLiteral,
    ObjectEqualsIri,
    ObjectEqualsLiteral,
    Operator,
    PredicateEquals,
    Ratio,
    ResultTarget,
    SubjectEquals,
    TypeOf,
    Unique,
    iter_conditions,
)
from .terms import RDF_TYPE, IRI, Literal, Term, Triple

# decimal numerals without exponent; anything else never equals a number
NUMERIC_LEXICAL = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)")


@dataclass(frozen=True)
class PassPlan:
    passes: int
    type_classes: frozenset[str] = frozenset()


def plan_passes(blueprints: Iterable[Blueprint]) -> PassPlan:
    classes = frozenset(
        cond.class_iri
        for b in blueprints
        for cond in iter_conditions(b.match_expr)
        if isinstance(cond, TypeOf)
    )
    return PassPlan(2 if classes else 1, classes)


def term_key(term: Term) -> Union[str, Term]:
    """Hashable stand-in for ``term`` that is cheaper to keep in large sets.

    IRIs are reduced to their string, which never equals a blank node or
    literal, so distinct terms keep distinct keys.
    """
    return term.value if type(term) is IRI else term


class TypeIndex:
    """Classes asserted for each term via ``rdf:type``.

    With ``classes`` set, only assertions of those classes are kept; the
    engine passes the classes its blueprints ask about so the index stays
    proportional to what ``typeof`` can observe.
    """

    def __init__(self, classes: Optional[frozenset[str]] = None) -> None:
        self.members: dict[str, set[Union[str, Term]]] = {}
        self._classes = classes

    def observe(self, t: Triple) -> None:
        if t.predicate.value != RDF_TYPE or type(t.object) is not IRI:
            return
        cls = t.object.value
        if self._classes is None or cls in self._classes:
            members = self.members.get(cls)
            if members is None:
                members = self.members[cls] = set()
            members.add(term_key(t.subject))

    def has_type(self, term: Term, class_iri: str) -> bool:
        members = self.members.get(class_iri)
        return members is not None and term_key(term) in members

    def classes_of(self, term: Term) -> set[str]:
        key = term_key(term)
        return {cls for cls, members in self.members.items() if key in members}

    def __len__(self) -> int:
        return sum(len(v) for v in self.members.values())

    @classmethod
    def build(cls, triples: Iterable[Triple], classes: Optional[frozenset[str]] = None) -> "TypeIndex":
        index = cls(classes)
        for t in triples:
            index.observe(t)
        return index


EMPTY_INDEX = TypeIndex(frozenset())


def literal_matches(term: Term, value: Union[str, Decimal]) -> bool:
    """Literal equality ignoring language tag and datatype.

    Strings compare by lexical form; numbers compare numerically against any
    literal whose lexical form is a decimal numeral.
    """
    if type(term) is not Literal:
        return False
    if isinstance(value, str):
        return term.lexical == value
    lexical = term.lexical
    if not NUMERIC_LEXICAL.fullmatch(lexical):
        return False
    try:
        return Decimal(lexical) == value
    except InvalidOperation:
        return False


def eval_condition(
    expr: ConditionExpr,
    t: Triple,
    index: TypeIndex = EMPTY_INDEX,
    registry: Optional[ExtensionRegistry] = None,
) -> bool:
    cls = type(expr)
    if cls is BoolOp:
        if expr.operator is Operator.AND:
            return eval_condition(expr.left, t, index, registry) and eval_condition(expr.right, t, index, registry)
        return eval_condition(expr.left, t, index, registry) or eval_condition(expr.right, t, index, registry)
    if cls is PredicateEquals:
        return t[1].value == expr.iri
    if cls is SubjectEquals:
        s = t[0]
        return type(s) is IRI and s.value == expr.iri
    if cls is ObjectEqualsIri:
        o = t[2]
        return type(o) is IRI and o.value == expr.iri
    if cls is TypeOf:
        return index.has_type(t[expr.position.index], expr.class_iri)
    if cls is ObjectEqualsLiteral:
        return literal_matches(t[2], expr.value)
    if cls is FunctionCall:
        if registry is None or expr.name not in registry:
            raise LqmlError(f"function {expr.name!r} is not registered")
        return bool(registry[expr.name](*(t[p.index] for p in expr.args)))
    raise TypeError(f"not a condition expression: {expr!r}")


@dataclass
class ActionState:
    counter: int = 0
    # keys come from term_key; map values are kept as full terms
    unique_seen: set[Union[str, Term]] = field(default_factory=set)
    map_accumulator: dict[Union[str, Term], list[Term]] = field(default_factory=dict)

    @property
    def unique_counter(self) -> int:
        return len(self.unique_seen)


def apply_actions(state: ActionState, actions: Sequence[Action], t: Triple) -> ActionState:
    """Update ``state`` in place for a triple that matched; returns ``state``."""
    for action in actions:
        cls = type(action)
        if cls is Count:
            state.counter += 1
        elif cls is Unique:
            state.unique_seen.add(term_key(t[action.position.index]))
        elif cls is Map:
            key = term_key(t[action.key.index])
            values = state.map_accumulator.get(key)
            if values is None:
                state.map_accumulator[key] = [t[action.value.index]]
            else:
                values.append(t[action.value.index])
    return state


def _operand(state: ActionState, expr: Union[NumberLiteral, ActionResult]) -> Fraction:
    if isinstance(expr, NumberLiteral):
        return Fraction(expr.value)
    if expr.target is ResultTarget.COUNT:
        return Fraction(state.counter)
    if expr.target is ResultTarget.UNIQUE:
        return Fraction(state.unique_counter)
    return Fraction(len(state.map_accumulator))


def finalize(state: ActionState, expr: FinallyExpr) -> Fraction:
    """Compute the observation value exactly.

    ``actionresult(map)`` is the number of distinct keys collected by the map.
    """
    if isinstance(expr, Ratio):
        denominator = _operand(state, expr.denominator)
        if denominator == 0:
            raise DivisionByZeroError("ratio denominator evaluated to zero")
        return _operand(state, expr.numerator) / denominator
    return _operand(state, expr)


def render_decimal(value: Fraction, max_digits: int = 10) -> str:
    """Shortest decimal with at most ``max_digits`` fraction digits, e.g. ``1.5``, ``0.0``.

    Values that need more digits are rounded half-to-even.
    """
    value = Fraction(value)
    scaled = round(value * 10**max_digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**max_digits)
    digits = str(frac).rjust(max_digits, "0").rstrip("0") or "0"
    return f"{sign}{whole}.{digits}"


@dataclass(frozen=True)
class ObservationRecord:
    metric_uri: str
    value: Fraction
    dataset_id: str
    computed_at: datetime
    blueprint_name: str = ""

    @property
    def decimal(self) -> str:
        return render_decimal(self.value)


@dataclass(frozen=True, eq=False)
class MetricFailure:
    metric_uri: str
    blueprint_name: str
    error: LqmlError

    @property
    def message(self) -> str:
        return str(self.error)

    def _key(self) -> tuple[str, str, type, str]:
        return self.metric_uri, self.blueprint_name, type(self.error), str(self.error)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MetricFailure):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


Outcome = Union[ObservationRecord, MetricFailure]


def _require_reiterable(source: Iterable[Triple], passes: int) -> None:
    if passes > 1 and iter(source) is source:
        raise LqmlError(
            "typeof needs two passes but the triple source is a one-shot iterator; "
            "pass a re-iterable source (a list or a TripleSource)"
        )


def assess(
    blueprints: Sequence[Blueprint],
    source: Iterable[Triple],
    dataset_id: str,
    registry: Optional[ExtensionRegistry] = None,
    computed_at: Optional[datetime] = None,
) -> list[Outcome]:
    """Evaluate ``blueprints`` over ``source`` and return one outcome per blueprint.

    A metric whose result cannot be computed yields a ``MetricFailure`` and
    leaves the others untouched. Errors raised while reading ``source`` abort
    the whole assessment.
    """
    registry = registry if registry is not None else ExtensionRegistry()
    for b in blueprints:
        for cond in iter_conditions(b.match_expr):
            if isinstance(cond, FunctionCall) and cond.name not in registry:
                raise LqmlError(f"blueprint {b.name!r} uses unregistered function {cond.name!r}")
    registry.freeze()

    plan = plan_passes(blueprints)
    _require_reiterable(source, plan.passes)

    index = TypeIndex(plan.type_classes)
    if plan.passes == 2:
        observe = index.observe
        for t in source:
            observe(t)

    work = [(b.match_expr, b.actions, ActionState()) for b in blueprints]
    for t in source:
        for expr, actions, state in work:
            if eval_condition(expr, t, index, registry):
                apply_actions(state, actions, t)

    when = computed_at or datetime.now(timezone.utc)
    outcomes: list[Outcome] = []
    for b, (_, _, state) in zip(blueprints, work):
        try:
            value = finalize(state, b.finally_expr)
        except DivisionByZeroError as exc:
            outcomes.append(MetricFailure(b.metric_uri, b.name, exc))
        else:
            outcomes.append(ObservationRecord(b.metric_uri, value, dataset_id, when, b.name))
    return outcomes
