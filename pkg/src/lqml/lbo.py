"""Blueprints as RDF in the Luzzu Blueprint Ontology (LBO).

Layout of one exported blueprint::

    bp:Name a lbo:Blueprint ;
        lbo:name "Name" ;
        rdfs:label "..." ; rdfs:comment "..." ;
        lbo:relatedTo <metric> ;
        lbo:hasResult [ a lbo:Ratio ; lbo:hasOutputParameters ( p1 p2 ) ] ;
        lbo:hasPatternMatchingRule [
            a drmo:Rule ;
            drmo:isComposedOf <condition> ;
            drmo:triggers [ a lbo:Count ; lbo:order 0 ] ,
                          [ a lbo:Unique ; lbo:order 1 ; lbo:hasParameters ( lbo:subject ) ]
        ] .

Conditions are ``drmo:Condition`` nodes. ``and``/``or`` nodes are
``lbo:ConditionGroup`` with ``lbo:operator`` and a two-element
``lbo:hasOperands`` list, which keeps the exact tree shape. Action nodes carry
``lbo:order`` so the declared order survives the trip through an unordered
property.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Optional, Sequence, Union

from .errors import LboShapeError
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
from .parser import Clause, RawBlueprintAst
from .rdfio.turtle import TurtleDocument, parse_turtle
from .terms import (
    RDF_FIRST,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    RDFS_NS,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
    BNode,
    IRI,
    Literal,
    Term,
    Triple,
)
from .vocab import BLUEPRINT, DRMO, LBO, LBO_PREFIXES


def _lbo(local: str) -> IRI:
    return IRI(LBO + local)


def _drmo(local: str) -> IRI:
    return IRI(DRMO + local)


A = IRI(RDF_TYPE)
FIRST, REST, NIL = IRI(RDF_FIRST), IRI(RDF_REST), IRI(RDF_NIL)
LABEL, COMMENT = IRI(RDFS_NS + "label"), IRI(RDFS_NS + "comment")

BLUEPRINT_CLASS = _lbo("Blueprint")
NAME = _lbo("name")
RELATED_TO = _lbo("relatedTo")
HAS_RESULT = _lbo("hasResult")
OUTPUT_RESULT = _lbo("OutputResult")
RATIO = _lbo("Ratio")
ACTION_RESULTS = _lbo("ActionResults")
HAS_OUTPUT_PARAMETERS = _lbo("hasOutputParameters")
HAS_RULE = _lbo("hasPatternMatchingRule")
RULE = _drmo("Rule")
IS_COMPOSED_OF = _drmo("isComposedOf")
TRIGGERS = _drmo("triggers")
CONDITION = _drmo("Condition")
ACTION = _drmo("Action")
TYPE_OF = _lbo("TypeOf")
CONDITION_GROUP = _lbo("ConditionGroup")
FUNCTION_CONDITION = _lbo("FunctionCondition")
OPERATOR = _lbo("operator")
HAS_OPERANDS = _lbo("hasOperands")
ON_TERM = _lbo("onTerm")
HAS_VALUE = _lbo("hasValue")
FUNCTION_NAME = _lbo("functionName")
HAS_PARAMETERS = _lbo("hasParameters")
ORDER = _lbo("order")
COUNT, UNIQUE, MAP = _lbo("Count"), _lbo("Unique"), _lbo("Map")

POSITION_IRIS = {
    Position.SUBJECT: _lbo("subject"),
    Position.PREDICATE: _lbo("predicate"),
    Position.OBJECT: _lbo("object"),
}
OPERATOR_IRIS = {Operator.AND: _lbo("And"), Operator.OR: _lbo("Or")}
TARGET_IRIS = {
    ResultTarget.COUNT: _lbo("countResult"),
    ResultTarget.UNIQUE: _lbo("uniqueResult"),
    ResultTarget.MAP: _lbo("mapResult"),
}
_EQUALS_KINDS = {
    SubjectEquals: Position.SUBJECT,
    PredicateEquals: Position.PREDICATE,
    ObjectEqualsIri: Position.OBJECT,
}


@dataclass
class LboGraph:
    node: Term
    statements: list[Triple] = field(default_factory=list)

    def to_document(self) -> TurtleDocument:
        return TurtleDocument(dict(LBO_PREFIXES), list(self.statements))

    def serialize(self) -> str:
        return self.to_document().serialize()


class _Exporter:
    def __init__(self, b: Blueprint) -> None:
        self.b = b
        self.out: list[Triple] = []
        self._n = 0

    def node(self) -> BNode:
        self._n += 1
        return BNode(f"{self.b.name}_{self._n}")

    def add(self, s: Term, p: IRI, o: Term) -> None:
        self.out.append(Triple(s, p, o))

    def rdf_list(self, items: Sequence[Term]) -> Term:
        head: Term = NIL
        nodes = [self.node() for _ in items]
        for node, item in zip(nodes, items):
            self.add(node, FIRST, item)
        for i, node in enumerate(nodes):
            self.add(node, REST, nodes[i + 1] if i + 1 < len(nodes) else NIL)
        return nodes[0] if nodes else head

    def run(self) -> LboGraph:
        b = self.b
        root = IRI(BLUEPRINT + b.name)
        self.add(root, A, BLUEPRINT_CLASS)
        self.add(root, NAME, Literal(b.name))
        self.add(root, LABEL, Literal(b.label))
        self.add(root, COMMENT, Literal(b.description))
        self.add(root, RELATED_TO, IRI(b.metric_uri))
        self.add(root, HAS_RESULT, self.result(b.finally_expr))
        rule = self.node()
        self.add(root, HAS_RULE, rule)
        self.add(rule, A, RULE)
        self.add(rule, IS_COMPOSED_OF, self.condition(b.match_expr))
        for i, action in enumerate(b.actions):
            self.add(rule, TRIGGERS, self.action(action, i))
        return LboGraph(root, self.out)

    def condition(self, expr: ConditionExpr) -> Term:
        node = self.node()
        if isinstance(expr, BoolOp):
            self.add(node, A, CONDITION_GROUP)
            self.add(node, OPERATOR, OPERATOR_IRIS[expr.operator])
            operands = [self.condition(expr.left), self.condition(expr.right)]
            self.add(node, HAS_OPERANDS, self.rdf_list(operands))
        elif isinstance(expr, TypeOf):
            self.add(node, A, TYPE_OF)
            self.add(node, ON_TERM, POSITION_IRIS[expr.position])
            self.add(node, HAS_VALUE, IRI(expr.class_iri))
        elif isinstance(expr, FunctionCall):
            self.add(node, A, FUNCTION_CONDITION)
            self.add(node, FUNCTION_NAME, Literal(expr.name))
            self.add(node, HAS_PARAMETERS, self.rdf_list([POSITION_IRIS[p] for p in expr.args]))
        elif isinstance(expr, ObjectEqualsLiteral):
            self.add(node, A, CONDITION)
            self.add(node, ON_TERM, POSITION_IRIS[Position.OBJECT])
            self.add(node, HAS_VALUE, _value_literal(expr.value))
        else:
            self.add(node, A, CONDITION)
            self.add(node, ON_TERM, POSITION_IRIS[_EQUALS_KINDS[type(expr)]])
            self.add(node, HAS_VALUE, IRI(expr.iri))
        return node

    def action(self, action: Action, order: int) -> Term:
        node = self.node()
        if isinstance(action, Count):
            self.add(node, A, COUNT)
            params: list[Position] = []
        elif isinstance(action, Unique):
            self.add(node, A, UNIQUE)
            params = [action.position]
        else:
            self.add(node, A, MAP)
            params = [action.key, action.value]
        self.add(node, ORDER, Literal(str(order), datatype=XSD_INTEGER))
        if params:
            self.add(node, HAS_PARAMETERS, self.rdf_list([POSITION_IRIS[p] for p in params]))
        return node

    def result(self, expr: FinallyExpr) -> Term:
        node = self.node()
        if isinstance(expr, Ratio):
            self.add(node, A, RATIO)
            params = [self.result_operand(expr.numerator), self.result_operand(expr.denominator)]
        elif isinstance(expr, ActionResult):
            self.add(node, A, ACTION_RESULTS)
            params = [TARGET_IRIS[expr.target]]
        else:
            self.add(node, A, OUTPUT_RESULT)
            params = [_value_literal(expr.value)]
        self.add(node, HAS_OUTPUT_PARAMETERS, self.rdf_list(params))
        return node

    def result_operand(self, expr: Union[NumberLiteral, ActionResult]) -> Term:
        if isinstance(expr, NumberLiteral):
            return _value_literal(expr.value)
        return self.result(expr)


def _value_literal(value: Union[str, Decimal]) -> Literal:
    if isinstance(value, str):
        return Literal(value)
    return Literal(format(value, "f"), datatype=XSD_DECIMAL)


def export_to_lbo(b: Blueprint) -> LboGraph:
    return _Exporter(b).run()


def export_document(blueprints: Iterable[Blueprint]) -> TurtleDocument:
    doc = TurtleDocument(dict(LBO_PREFIXES))
    for b in blueprints:
        doc.statements.extend(export_to_lbo(b).statements)
    return doc


def export_turtle(blueprints: Iterable[Blueprint]) -> str:
    return export_document(blueprints).serialize()


# -- import -------------------------------------------------------------------

_POSITIONS_BY_IRI = {v: k for k, v in POSITION_IRIS.items()}
_OPERATORS_BY_IRI = {v: k for k, v in OPERATOR_IRIS.items()}
_TARGETS_BY_IRI = {v: k for k, v in TARGET_IRIS.items()}


class _Importer:
    def __init__(self, statements: Iterable[Triple]) -> None:
        self.props: dict[Term, dict[IRI, list[Term]]] = defaultdict(lambda: defaultdict(list))
        for t in statements:
            self.props[t.subject][t.predicate].append(t.object)
        self.problems: list[str] = []

    def values(self, node: Term, prop: IRI) -> list[Term]:
        return self.props.get(node, {}).get(prop, [])

    def one(self, node: Term, prop: IRI, what: str) -> Optional[Term]:
        found = list(dict.fromkeys(self.values(node, prop)))
        if not found:
            self.problems.append(f"{_short(prop)} missing ({what})")
            return None
        if len(found) > 1:
            self.problems.append(f"{_short(prop)} must occur exactly once on {_show(node)}, found {len(found)}")
            return None
        return found[0]

    def types(self, node: Term) -> set[Term]:
        return set(self.values(node, A))

    def text(self, node: Term, prop: IRI, what: str) -> Optional[str]:
        value = self.one(node, prop, what)
        if value is None:
            return None
        if not isinstance(value, Literal):
            self.problems.append(f"{_short(prop)} on {_show(node)} must be a literal")
            return None
        return value.lexical

    def rdf_list(self, head: Optional[Term], what: str) -> Optional[list[Term]]:
        if head is None:
            return None
        items: list[Term] = []
        seen: set[Term] = set()
        node = head
        while node != NIL:
            if node in seen or not isinstance(node, (BNode, IRI)):
                self.problems.append(f"{what} is not a well-formed rdf:List")
                return None
            seen.add(node)
            first, rest = self.values(node, FIRST), self.values(node, REST)
            if len(first) != 1 or len(rest) != 1:
                self.problems.append(f"{what} is not a well-formed rdf:List")
                return None
            items.append(first[0])
            node = rest[0]
        return items

    def position(self, term: Term, what: str) -> Optional[Position]:
        pos = _POSITIONS_BY_IRI.get(term)  # type: ignore[arg-type]
        if pos is None:
            self.problems.append(f"{what}: {_show(term)} is not one of lbo:subject, lbo:predicate, lbo:object")
        return pos

    def blueprint(self, root: Term, registry: Optional[ExtensionRegistry]) -> Blueprint:
        if BLUEPRINT_CLASS not in self.types(root):
            self.problems.append(f"{_show(root)} is not typed lbo:Blueprint")
        name = self.text(root, NAME, "blueprint name")
        label = self.text(root, LABEL, "label")
        description = self.text(root, COMMENT, "description")
        metric = self.one(root, RELATED_TO, "metric IRI")
        if metric is not None and not isinstance(metric, IRI):
            self.problems.append("lbo:relatedTo must point to an IRI")
            metric = None
        result_node = self.one(root, HAS_RESULT, "assessment result")
        rule = self.one(root, HAS_RULE, "pattern matching rule")

        result = self.result(result_node) if result_node is not None else None
        match_expr = None
        actions: Optional[tuple[Action, ...]] = None
        if rule is not None:
            if RULE not in self.types(rule):
                self.problems.append("pattern matching rule is not typed drmo:Rule")
            cond = self.one(rule, IS_COMPOSED_OF, "rule condition")
            match_expr = self.condition(cond, 0) if cond is not None else None
            actions = self.actions(rule)

        if self.problems:
            raise LboShapeError(self.problems)
        assert metric is not None and name is not None
        ast = RawBlueprintAst(name, tuple(
            Clause(k, v) for k, v in zip(
                CLAUSE_ORDER,
                (metric.value, label, description, match_expr, actions, result),  # type: ignore[union-attr]
            )
        ))
        return validate(ast, registry)

    def condition(self, node: Term, depth: int) -> Optional[ConditionExpr]:
        if depth > 1000:
            self.problems.append("condition tree is cyclic or too deep")
            return None
        kinds = self.types(node)
        if CONDITION_GROUP in kinds:
            op_iri = self.one(node, OPERATOR, "group operator")
            op = _OPERATORS_BY_IRI.get(op_iri) if op_iri is not None else None  # type: ignore[arg-type]
            if op_iri is not None and op is None:
                self.problems.append(f"unknown group operator {_show(op_iri)}")
            operands = self.rdf_list(self.one(node, HAS_OPERANDS, "group operands"), "lbo:hasOperands")
            if operands is not None and len(operands) != 2:
                self.problems.append(f"condition group needs exactly 2 operands, found {len(operands)}")
                return None
            if op is None or operands is None:
                return None
            left = self.condition(operands[0], depth + 1)
            right = self.condition(operands[1], depth + 1)
            if left is None or right is None:
                return None
            return BoolOp(op, left, right)
        if FUNCTION_CONDITION in kinds:
            name = self.text(node, FUNCTION_NAME, "function name")
            params = self.rdf_list(self.one(node, HAS_PARAMETERS, "function parameters"), "lbo:hasParameters")
            if name is None or params is None:
                return None
            args = [self.position(p, "function parameter") for p in params]
            if any(a is None for a in args):
                return None
            return FunctionCall(name, tuple(args))  # type: ignore[arg-type]
        if TYPE_OF in kinds or CONDITION in kinds:
            term = self.one(node, ON_TERM, "condition term")
            value = self.one(node, HAS_VALUE, "condition value")
            pos = self.position(term, "lbo:onTerm") if term is not None else None
            if pos is None or value is None:
                return None
            if TYPE_OF in kinds:
                if not isinstance(value, IRI):
                    self.problems.append("typeof condition needs a class IRI")
                    return None
                return TypeOf(pos, value.value)
            if isinstance(value, IRI):
                return {
                    Position.SUBJECT: SubjectEquals,
                    Position.PREDICATE: PredicateEquals,
                    Position.OBJECT: ObjectEqualsIri,
                }[pos](value.value)
            if isinstance(value, Literal) and pos is Position.OBJECT:
                literal = self.literal_value(value)
                return ObjectEqualsLiteral(literal) if literal is not None else None
            self.problems.append(f"condition on {pos.value} must compare against an IRI")
            return None
        self.problems.append(f"{_show(node)} is not a recognised condition node")
        return None

    def literal_value(self, lit: Literal) -> Union[str, Decimal, None]:
        if lit.datatype in (XSD_DECIMAL, XSD_INTEGER):
            try:
                return Decimal(lit.lexical)
            except InvalidOperation:
                self.problems.append(f"bad numeric literal {lit.lexical!r}")
                return None
        if lit.datatype in (None, XSD_STRING) and not lit.lang:
            return lit.lexical
        self.problems.append(f"unsupported literal {lit}")
        return None

    def actions(self, rule: Term) -> Optional[tuple[Action, ...]]:
        nodes = list(dict.fromkeys(self.values(rule, TRIGGERS)))
        if not nodes:
            self.problems.append("drmo:triggers missing (action on match)")
            return None
        ordered: list[tuple[int, Action]] = []
        for node in nodes:
            kinds = self.types(node)
            order_lit = self.one(node, ORDER, "action order")
            order = _int(order_lit)
            if order_lit is not None and order is None:
                self.problems.append(f"lbo:order on {_show(node)} must be an integer")
            if COUNT in kinds:
                action: Optional[Action] = Count()
            elif UNIQUE in kinds or MAP in kinds:
                params = self.rdf_list(self.one(node, HAS_PARAMETERS, "action parameters"), "lbo:hasParameters")
                positions = [self.position(p, "action parameter") for p in params or ()]
                want = 1 if UNIQUE in kinds else 2
                if params is not None and len(params) != want:
                    self.problems.append(f"{'unique' if want == 1 else 'map'} takes {want} parameter(s)")
                    action = None
                elif params is None or any(p is None for p in positions):
                    action = None
                elif want == 1:
                    action = Unique(positions[0])  # type: ignore[arg-type]
                else:
                    action = Map(positions[0], positions[1])  # type: ignore[arg-type]
            else:
                self.problems.append(f"{_show(node)} is not an lbo:Count, lbo:Unique or lbo:Map action")
                action = None
            if action is not None and order is not None:
                ordered.append((order, action))
        if len({o for o, _ in ordered}) != len(ordered):
            self.problems.append("action lbo:order values must be distinct")
        return tuple(a for _, a in sorted(ordered, key=lambda pair: pair[0]))

    def result(self, node: Term) -> Optional[FinallyExpr]:
        kinds = self.types(node)
        params = self.rdf_list(
            self.one(node, HAS_OUTPUT_PARAMETERS, "output parameters"), "lbo:hasOutputParameters"
        )
        if params is None:
            return None
        if RATIO in kinds:
            if len(params) != 2:
                self.problems.append(f"lbo:Ratio needs 2 output parameters, found {len(params)}")
                return None
            parts = [self.ratio_operand(p) for p in params]
            if parts[0] is None or parts[1] is None:
                return None
            return Ratio(parts[0], parts[1])
        if len(params) != 1:
            self.problems.append(f"result needs 1 output parameter, found {len(params)}")
            return None
        if ACTION_RESULTS in kinds:
            target = _TARGETS_BY_IRI.get(params[0])  # type: ignore[arg-type]
            if target is None:
                self.problems.append(f"{_show(params[0])} is not an action result target")
                return None
            return ActionResult(target)
        if OUTPUT_RESULT in kinds and isinstance(params[0], Literal):
            value = self.literal_value(params[0])
            if isinstance(value, Decimal):
                return NumberLiteral(value)
        self.problems.append(f"{_show(node)} is not a recognised lbo:OutputResult")
        return None

    def ratio_operand(self, term: Term) -> Union[NumberLiteral, ActionResult, None]:
        if isinstance(term, Literal):
            value = self.literal_value(term)
            if isinstance(value, Decimal):
                return NumberLiteral(value)
            self.problems.append("ratio operands must be numbers or action results")
            return None
        result = self.result(term)
        if result is not None and not isinstance(result, ActionResult):
            self.problems.append("ratio operands must be numbers or action results")
            return None
        return result


def _int(term: Optional[Term]) -> Optional[int]:
    if isinstance(term, Literal) and term.datatype in (XSD_INTEGER, None):
        try:
            return int(term.lexical)
        except ValueError:
            return None
    return None


def _short(iri: IRI) -> str:
    for prefix, ns in LBO_PREFIXES.items():
        if iri.value.startswith(ns):
            return f"{prefix}:{iri.value[len(ns):]}"
    return str(iri)


def _show(term: Term) -> str:
    return _short(term) if isinstance(term, IRI) else str(term)


def import_from_lbo(graph: LboGraph, registry: Optional[ExtensionRegistry] = None) -> Blueprint:
    """Rebuild the blueprint rooted at ``graph.node``.

    Raises ``LboShapeError`` listing every missing, duplicated or malformed
    property, and ``ValidationError`` when the shape is fine but the
    blueprint itself is not valid.
    """
    return _Importer(graph.statements).blueprint(graph.node, registry)


def blueprint_nodes(statements: Iterable[Triple]) -> list[Term]:
    return list(dict.fromkeys(t.subject for t in statements if t.predicate == A and t.object == BLUEPRINT_CLASS))


def import_document(
    doc: Union[TurtleDocument, str], registry: Optional[ExtensionRegistry] = None
) -> list[Blueprint]:
    """Import every ``lbo:Blueprint`` in a Turtle document, in document order."""
    if isinstance(doc, str):
        doc = parse_turtle(doc)
    return [import_from_lbo(LboGraph(node, doc.statements), registry) for node in blueprint_nodes(doc.statements)]
