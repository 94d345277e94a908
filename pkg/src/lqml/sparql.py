"""Translate match expressions into SPARQL SELECT queries.

The query selects exactly the triples the engine would match::

    (?p == <u>)             ?s ?p ?o . FILTER(?p = <u>)
    (typeof(?s) == <C>)     ?s a <C> . ?s ?p ?o
    a & b                   patterns and filters of both sides in one group
    a | b                   { a } UNION { b }

Every UNION branch restates ``?s ?p ?o`` so its filters see bound variables;
``SELECT DISTINCT`` removes duplicates when several branches hold.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from typing import Union

from .errors import UntranslatableError
from .model import (
    BoolOp,
    ConditionExpr,
    FunctionCall,
    ObjectEqualsIri,
    ObjectEqualsLiteral,
    Operator,
    Position,
    PredicateEquals,
    SubjectEquals,
    TypeOf,
)
from .terms import XSD_NS

BASE_PATTERN = "?s ?p ?o"
# keep in step with engine.NUMERIC_LEXICAL
_NUMERIC_REGEX = "^[+-]?([0-9]+([.][0-9]*)?|[.][0-9]+)$"


@dataclass
class _Group:
    patterns: list[str] = field(default_factory=list)
    filters: list[str] = field(default_factory=list)
    unions: list[list["_Group"]] = field(default_factory=list)

    def merge(self, other: "_Group") -> None:
        for p in other.patterns:
            if p not in self.patterns:
                self.patterns.append(p)
        self.filters.extend(other.filters)
        self.unions.extend(other.unions)

    def render(self, indent: int) -> list[str]:
        pad = "  " * indent
        lines = [f"{pad}{p} ." for p in self.patterns]
        lines.append(f"{pad}{BASE_PATTERN} .")
        for branches in self.unions:
            for i, branch in enumerate(branches):
                opener = "{" if i == 0 else "UNION {"
                lines.append(f"{pad}{opener}")
                lines.extend(branch.render(indent + 1))
                lines.append(f"{pad}}}")
        lines.extend(f"{pad}FILTER({f})" for f in self.filters)
        return lines


def _iri(value: str) -> str:
    return f"<{value}>"


def _string(value: str) -> str:
    escaped = (
        value.replace("\\", "\\\\").replace('"', '\\"')
        .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    )
    return f'"{escaped}"'


def _literal_filter(value: Union[str, Decimal]) -> str:
    if isinstance(value, str):
        return f"isLiteral(?o) && STR(?o) = {_string(value)}"
    number = format(value, "f")
    if "." not in number:
        number += ".0"
    return (
        f'isLiteral(?o) && REGEX(STR(?o), "{_NUMERIC_REGEX}") '
        f"&& <{XSD_NS}decimal>(STR(?o)) = {number}"
    )


def _leaf(expr: ConditionExpr) -> _Group:
    if isinstance(expr, TypeOf):
        var = "?s" if expr.position is Position.SUBJECT else "?o"
        return _Group(patterns=[f"{var} a {_iri(expr.class_iri)}"])
    if isinstance(expr, SubjectEquals):
        return _Group(filters=[f"?s = {_iri(expr.iri)}"])
    if isinstance(expr, PredicateEquals):
        return _Group(filters=[f"?p = {_iri(expr.iri)}"])
    if isinstance(expr, ObjectEqualsIri):
        return _Group(filters=[f"?o = {_iri(expr.iri)}"])
    if isinstance(expr, ObjectEqualsLiteral):
        return _Group(filters=[_literal_filter(expr.value)])
    if isinstance(expr, FunctionCall):
        raise UntranslatableError(
            f"custom function {expr.name!r} has no portable SPARQL equivalent"
        )
    raise TypeError(f"not a condition expression: {expr!r}")


def _branches(expr: ConditionExpr) -> list[_Group]:
    if isinstance(expr, BoolOp) and expr.operator is Operator.OR:
        return _branches(expr.left) + _branches(expr.right)
    return [_translate(expr)]


def _translate(expr: ConditionExpr) -> _Group:
    if isinstance(expr, BoolOp):
        if expr.operator is Operator.OR:
            return _Group(unions=[_branches(expr)])
        group = _translate(expr.left)
        group.merge(_translate(expr.right))
        return group
    return _leaf(expr)


@dataclass(frozen=True)
class SparqlQuery:
    select_variables: tuple[str, ...]
    where_block: str

    @property
    def text(self) -> str:
        return f"SELECT DISTINCT {' '.join(self.select_variables)} WHERE {{\n{self.where_block}\n}}\n"

    def __str__(self) -> str:
        return self.text


def to_sparql(expr: ConditionExpr) -> SparqlQuery:
    """Build the SELECT query whose solutions are the triples ``expr`` matches.

    Raises ``UntranslatableError`` if ``expr`` calls a custom function.
    """
    group = _translate(expr)
    if len(group.unions) == 1 and not group.patterns and not group.filters:
        # a bare disjunction needs no enclosing base pattern
        lines = []
        for i, branch in enumerate(group.unions[0]):
            lines.append("  {" if i == 0 else "  UNION {")
            lines.extend(branch.render(2))
            lines.append("  }")
        return SparqlQuery(("?s", "?p", "?o"), "\n".join(lines))
    return SparqlQuery(("?s", "?p", "?o"), "\n".join(group.render(1)))
