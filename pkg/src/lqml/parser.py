"""Recursive descent parser for LQML.

Grammar (clauses are fixed in this order, one blueprint per ``def`` block)::

    document   := ( definition "." )*
    definition := "def" "{" IDENT "}" ":"
                  "metric" "{" IRI "}" ";"
                  "label" "{" STRING "}" ";"
                  "description" "{" STRING "}" ";"
                  "match" "{" expr "}" ";"
                  "action" "{" action ( ","? action )* "}" ";"
                  "finally" "{" result "}"
    expr       := group ( LOGIC group )*          -- one operator kind per level
    group      := "(" ( expr | condition ) ")"
    condition  := "typeof" "(" ("?s"|"?o") ")" "==" IRI
                | "?s" "==" IRI | "?p" "==" IRI
                | "?o" "==" ( IRI | STRING | NUMBER )
                | IDENT "(" ( VAR ","? )* ")"
    action     := "count" | "unique" "(" VAR ")" | "map" "(" VAR ","? VAR ")"
    result     := NUMBER | actionresult | "ratio" "(" operand "," operand ")"
    operand    := NUMBER | actionresult | "count" | "unique" | "map"

``&&``/``||`` are accepted as spellings of ``&``/``|``. Chains of one operator
associate to the left; mixing ``&`` and ``|`` without parentheses is rejected
rather than resolved by precedence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any, Iterable, Optional, Sequence, Union

from .errors import MixedOperatorError, ParseError
from .lexer import Token, TokenKind, tokenize
from .model import (
    CLAUSE_ORDER,
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
    Position,
    PredicateEquals,
    Ratio,
    ResultTarget,
    SubjectEquals,
    TypeOf,
    Unique,
    validate,
)


@dataclass(frozen=True)
class Clause:
    keyword: str
    body: Any
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RawBlueprintAst:
    name: str
    clauses: tuple[Clause, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)
    end_line: int = field(default=0, compare=False)
    end_column: int = field(default=0, compare=False)

    @property
    def source_span(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.line, self.column), (self.end_line, self.end_column)

    def clause(self, keyword: str) -> Optional[Clause]:
        return next((c for c in self.clauses if c.keyword == keyword), None)


_POSITIONS = {p.value: p for p in Position}
_TARGETS = {t.value: t for t in ResultTarget}
_OPERATORS = {"&": Operator.AND, "&&": Operator.AND, "|": Operator.OR, "||": Operator.OR}


class _Parser:
    def __init__(self, tokens: Sequence[Token]) -> None:
        self.tokens = [t for t in tokens if t.kind is not TokenKind.COMMENT]
        if self.tokens:
            last = self.tokens[-1]
            eof = Token(TokenKind.EOF, "", last.line, last.column + len(last.lexeme))
        else:
            eof = Token(TokenKind.EOF, "", 1, 1)
        self.tokens.append(eof)
        self.pos = 0

    # -- navigation -------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def at(self, lexeme: str) -> bool:
        tok = self.current
        return tok.lexeme == lexeme and tok.kind in (TokenKind.PUNCTUATION, TokenKind.KEYWORD)

    def error(self, expected: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.current
        return ParseError(tok.line, tok.column, expected, tok.describe())

    def expect(self, lexeme: str, expected: Optional[str] = None) -> Token:
        if not self.at(lexeme):
            raise self.error(expected or repr(lexeme))
        return self.advance()

    def expect_kind(self, kind: TokenKind, expected: str) -> Token:
        if self.current.kind is not kind:
            raise self.error(expected)
        return self.advance()

    # -- document -----------------------------------------------------------

    def document(self) -> list[RawBlueprintAst]:
        blueprints: list[RawBlueprintAst] = []
        names: set[str] = set()
        while self.current.kind is not TokenKind.EOF:
            ast = self.definition(names)
            names.add(ast.name)
            blueprints.append(ast)
        return blueprints

    def definition(self, taken: set[str]) -> RawBlueprintAst:
        start = self.expect("def", "'def'")
        self.expect("{")
        name_tok = self.expect_kind(TokenKind.IDENTIFIER, "blueprint name")
        if name_tok.lexeme in taken:
            raise self.error("a blueprint name not used earlier in this file", name_tok)
        self.expect("}")
        self.expect(":")

        clauses = []
        for i, keyword in enumerate(CLAUSE_ORDER):
            tok = self.current
            if not self.at(keyword):
                raise self.error(f"'{keyword}' clause")
            self.advance()
            self.expect("{")
            body = getattr(self, f"_{keyword}_body")()
            self.expect("}", "'}'" if keyword != "finally" else "'}' (finally takes exactly one result)")
            clauses.append(Clause(keyword, body, tok.line, tok.column))
            if i < len(CLAUSE_ORDER) - 1:
                self.expect(";")
        end = self.expect(".", "'.' after the finally clause")
        return RawBlueprintAst(
            name_tok.lexeme, tuple(clauses), start.line, start.column, end.line, end.column
        )

    def _metric_body(self) -> str:
        return self.expect_kind(TokenKind.IRI_REF, "metric IRI in angle brackets").value

    def _label_body(self) -> str:
        return self.expect_kind(TokenKind.QUOTED_STRING, "quoted label").value

    def _description_body(self) -> str:
        return self.expect_kind(TokenKind.QUOTED_STRING, "quoted description").value

    def _match_body(self) -> ConditionExpr:
        return self.expr()

    def _action_body(self) -> tuple[Action, ...]:
        actions = [self.action()]
        while not self.at("}"):
            if self.at(","):
                self.advance()
            actions.append(self.action())
        return tuple(actions)

    def _finally_body(self) -> FinallyExpr:
        if self.at("ratio"):
            self.advance()
            self.expect("(")
            numerator = self.ratio_operand()
            self.expect(",")
            denominator = self.ratio_operand()
            self.expect(")")
            return Ratio(numerator, denominator)
        if self.current.kind is TokenKind.NUMBER:
            return NumberLiteral(Decimal(self.advance().lexeme))
        if self.at("actionresult"):
            return self.action_result()
        raise self.error("a number, actionresult(...) or ratio(...)")

    # -- conditions ---------------------------------------------------------

    def expr(self) -> ConditionExpr:
        left = self.group()
        op: Optional[Operator] = None
        while self.current.kind is TokenKind.LOGICAL_OPERATOR:
            tok = self.advance()
            this = _OPERATORS[tok.lexeme]
            if op is not None and this is not op:
                raise MixedOperatorError(
                    tok.line, tok.column,
                    f"'{op.value}' or parentheses around the mixed conditions",
                    tok.describe(),
                )
            op = this
            left = BoolOp(op, left, self.group())
        return left

    def group(self) -> ConditionExpr:
        self.expect("(", "'(' opening a condition")
        inner = self.expr() if self.at("(") else self.condition()
        self.expect(")")
        return inner

    def variable(self, allowed: Iterable[Position] = tuple(Position)) -> Position:
        allowed = tuple(allowed)
        tok = self.current
        pos = _POSITIONS.get(tok.lexeme) if tok.kind is TokenKind.KEYWORD else None
        if pos is None or pos not in allowed:
            raise self.error(" or ".join(p.value for p in allowed))
        self.advance()
        return pos

    def condition(self) -> ConditionExpr:
        tok = self.current
        if self.at("typeof"):
            self.advance()
            self.expect("(")
            pos = self.variable((Position.SUBJECT, Position.OBJECT))
            self.expect(")")
            self.expect_kind(TokenKind.BOOLEAN_OPERATOR, "'=='")
            return TypeOf(pos, self.expect_kind(TokenKind.IRI_REF, "class IRI").value)
        if tok.kind is TokenKind.KEYWORD and tok.lexeme in _POSITIONS:
            pos = self.variable()
            self.expect_kind(TokenKind.BOOLEAN_OPERATOR, "'=='")
            value = self.current
            if value.kind is TokenKind.IRI_REF:
                self.advance()
                return {
                    Position.SUBJECT: SubjectEquals,
                    Position.PREDICATE: PredicateEquals,
                    Position.OBJECT: ObjectEqualsIri,
                }[pos](value.value)
            if pos is Position.OBJECT and value.kind is TokenKind.QUOTED_STRING:
                self.advance()
                return ObjectEqualsLiteral(value.value)
            if pos is Position.OBJECT and value.kind is TokenKind.NUMBER:
                self.advance()
                return ObjectEqualsLiteral(Decimal(value.lexeme))
            if pos is Position.OBJECT:
                raise self.error("IRI, quoted string or number")
            raise self.error("IRI")
        if tok.kind is TokenKind.IDENTIFIER:
            self.advance()
            self.expect("(")
            args = []
            while not self.at(")"):
                args.append(self.variable())
                if self.at(","):
                    self.advance()
            self.expect(")")
            return FunctionCall(tok.lexeme, tuple(args))
        raise self.error("a condition (typeof, ?s, ?p, ?o or a function call)")

    # -- actions and results -------------------------------------------------

    def action(self) -> Action:
        if self.at("count"):
            self.advance()
            return Count()
        if self.at("unique"):
            self.advance()
            self.expect("(")
            pos = self.variable()
            self.expect(")")
            return Unique(pos)
        if self.at("map"):
            self.advance()
            self.expect("(")
            key = self.variable()
            if self.at(","):
                self.advance()
            value = self.variable()
            self.expect(")")
            return Map(key, value)
        raise self.error("count, unique(...) or map(...)")

    def action_result(self) -> ActionResult:
        self.expect("actionresult")
        self.expect("(")
        tok = self.current
        if tok.kind is not TokenKind.KEYWORD or tok.lexeme not in _TARGETS:
            raise self.error("map, count or unique")
        self.advance()
        self.expect(")")
        return ActionResult(_TARGETS[tok.lexeme])

    def ratio_operand(self) -> Union[NumberLiteral, ActionResult]:
        tok = self.current
        if tok.kind is TokenKind.NUMBER:
            self.advance()
            return NumberLiteral(Decimal(tok.lexeme))
        if self.at("actionresult"):
            return self.action_result()
        if tok.kind is TokenKind.KEYWORD and tok.lexeme in _TARGETS:
            self.advance()
            return ActionResult(_TARGETS[tok.lexeme])
        raise self.error("a number, actionresult(...), count, unique or map")


def parse(tokens: Sequence[Token]) -> list[RawBlueprintAst]:
    """Parse a token stream holding zero or more ``def`` blocks."""
    return _Parser(tokens).document()


def parse_condition_expr(tokens: Sequence[Token]) -> ConditionExpr:
    """Parse the body of a ``match{...}`` clause."""
    parser = _Parser(tokens)
    expr = parser.expr()
    if parser.current.kind is not TokenKind.EOF:
        raise parser.error("end of condition")
    return expr


def parse_source(source: str) -> list[RawBlueprintAst]:
    return parse(tokenize(source))


def load_blueprints(source: str, registry: Optional[ExtensionRegistry] = None) -> list[Blueprint]:
    """Tokenize, parse and validate every blueprint in ``source``."""
    return [validate(ast, registry) for ast in parse_source(source)]


# -- pretty printing ---------------------------------------------------------

def _quote(text: str) -> str:
    escaped = (
        text.replace("\\", "\\\\").replace('"', '\\"')
        .replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")
    )
    return f'"{escaped}"'


def _number(value: Decimal) -> str:
    return format(value, "f")


def format_condition(expr: ConditionExpr) -> str:
    if isinstance(expr, BoolOp):
        left = format_condition(expr.left)
        if isinstance(expr.left, BoolOp) and expr.left.operator is not expr.operator:
            left = f"({left})"
        right = format_condition(expr.right)
        if isinstance(expr.right, BoolOp):
            right = f"({right})"
        return f"{left} {expr.operator.value} {right}"
    if isinstance(expr, TypeOf):
        return f"(typeof({expr.position.value}) == <{expr.class_iri}>)"
    if isinstance(expr, SubjectEquals):
        return f"(?s == <{expr.iri}>)"
    if isinstance(expr, PredicateEquals):
        return f"(?p == <{expr.iri}>)"
    if isinstance(expr, ObjectEqualsIri):
        return f"(?o == <{expr.iri}>)"
    if isinstance(expr, ObjectEqualsLiteral):
        value = _quote(expr.value) if isinstance(expr.value, str) else _number(expr.value)
        return f"(?o == {value})"
    if isinstance(expr, FunctionCall):
        return f"({expr.name}({', '.join(p.value for p in expr.args)}))"
    raise TypeError(f"not a condition: {expr!r}")


def format_action(action: Action) -> str:
    if isinstance(action, Count):
        return "count"
    if isinstance(action, Unique):
        return f"unique({action.position.value})"
    return f"map({action.key.value}, {action.value.value})"


def format_finally(expr: FinallyExpr) -> str:
    if isinstance(expr, NumberLiteral):
        return _number(expr.value)
    if isinstance(expr, ActionResult):
        return f"actionresult({expr.target.value})"
    return f"ratio({format_finally(expr.numerator)}, {format_finally(expr.denominator)})"


def _format_body(keyword: str, body: Any) -> str:
    if keyword == "metric":
        return f"<{body}>"
    if keyword in ("label", "description"):
        return _quote(body)
    if keyword == "match":
        return format_condition(body)
    if keyword == "action":
        return ", ".join(format_action(a) for a in body)
    return format_finally(body)


def format_ast(ast: RawBlueprintAst) -> str:
    lines = [f"def{{{ast.name}}}:"]
    for i, clause in enumerate(ast.clauses):
        end = "." if i == len(ast.clauses) - 1 else ";"
        lines.append(f"  {clause.keyword}{{{_format_body(clause.keyword, clause.body)}}}{end}")
    return "\n".join(lines) + "\n"


def to_ast(b: Blueprint) -> RawBlueprintAst:
    bodies = (b.metric_uri, b.label, b.description, b.match_expr, b.actions, b.finally_expr)
    return RawBlueprintAst(b.name, tuple(Clause(k, v) for k, v in zip(CLAUSE_ORDER, bodies)))


def format_blueprint(b: Blueprint) -> str:
    return format_ast(to_ast(b))


def format_document(asts: Iterable[RawBlueprintAst]) -> str:
    return "\n".join(format_ast(a) for a in asts)
