import dataclasses

import pytest
from hypothesis import given

from lqml.errors import DuplicateFunctionError, ValidationError
from lqml.model import (
    ActionResult,
    Count,
    ExtensionRegistry,
    FunctionCall,
    Position,
    Ratio,
    ResultTarget,
    Unique,
    default_registry,
    feature_complete,
    register_function,
    validate,
)
from lqml.parser import Clause, RawBlueprintAst, parse_source

from strategies import blueprints

HEAD = 'def{B}:\nmetric{<http://ex.org/m>};\nlabel{"l"};\ndescription{"d"};\n'


def ast_of(match="(?p == <http://ex.org/p>)", action="count", final="actionresult(count)"):
    (ast,) = parse_source(f"{HEAD}match{{{match}}};\naction{{{action}}};\nfinally{{{final}}}.")
    return ast


def test_subclass_counter_blueprint(subclass_counter):
    b = subclass_counter
    assert b.metric_uri == "http://www.example.org/ebiqm#SubClassCountingMetric"
    assert b.actions == (Count(), Unique(Position.SUBJECT))
    assert b.finally_expr == Ratio(ActionResult(ResultTarget.COUNT), ActionResult(ResultTarget.UNIQUE))
    assert feature_complete(b)
    assert not b.uses_type_index()


def test_label_ratio_uses_type_index(label_ratio):
    assert label_ratio.uses_type_index()


def test_unbacked_actionresult():
    with pytest.raises(ValidationError) as info:
        validate(ast_of(final="actionresult(unique)"))
    assert info.value.kinds == {"unbacked-actionresult"}


def test_unknown_function_then_registered():
    ast = ast_of(match="(isResolvable(?s))")
    with pytest.raises(ValidationError) as info:
        validate(ast, ExtensionRegistry())
    assert info.value.kinds == {"unknown-function"}
    registry = register_function(ExtensionRegistry(), "isResolvable", lambda s: True)
    b = validate(ast, registry)
    assert b.match_expr == FunctionCall("isResolvable", (Position.SUBJECT,))


def test_default_registry_functions():
    registry = default_registry()
    assert registry.names() == ["hasLangTag", "isBlank", "isIri", "isLiteral"]
    validate(ast_of(match="(hasLangTag(?o))"), registry)


def test_register_twice():
    registry = ExtensionRegistry().register("isResolvable", lambda s: True)
    assert len(registry) == 1
    with pytest.raises(DuplicateFunctionError):
        registry.register("isResolvable", lambda s: False)


def test_register_rejects_bad_name_and_frozen():
    registry = ExtensionRegistry()
    with pytest.raises(ValueError):
        registry.register("not a name", lambda: True)
    registry.freeze()
    with pytest.raises(RuntimeError):
        registry.register("late", lambda: True)


def test_all_violations_reported_together():
    ast = ast_of(match="(isShiny(?o))", action="count, count, map(?s, ?s)", final="actionresult(unique)")
    with pytest.raises(ValidationError) as info:
        validate(ast)
    assert info.value.kinds == {"unknown-function", "duplicate-action", "map-positions", "unbacked-actionresult"}
    assert all(v.line is not None for v in info.value.violations)


def test_relative_iris():
    with pytest.raises(ValidationError) as info:
        validate(ast_of(match="(?p == <p>) | (typeof(?s) == <Cls>)"))
    assert [v.kind for v in info.value.violations] == ["relative-iri", "relative-iri"]


def test_hand_built_ast_errors():
    # ASTs built directly can break clause rules the parser enforces
    clauses = (
        Clause("label", "l"),
        Clause("metric", "http://ex.org/m"),
        Clause("description", "d"),
        Clause("match", ast_of().clause("match").body),
        Clause("action", (Count(),)),
        Clause("finally", ActionResult(ResultTarget.COUNT)),
    )
    with pytest.raises(ValidationError) as info:
        validate(RawBlueprintAst("B", clauses))
    assert info.value.kinds == {"clause-order"}

    with pytest.raises(ValidationError) as info:
        validate(RawBlueprintAst("B", clauses[:2] + (Clause("where", None),)))
    assert {"unknown-clause", "missing-feature"} <= info.value.kinds

    with pytest.raises(ValidationError) as info:
        validate(RawBlueprintAst("B", clauses[1:2] * 2))
    assert "duplicate-clause" in info.value.kinds


def test_empty_action_list():
    (ast,) = parse_source(f"{HEAD}match{{(?p == <http://ex.org/p>)}};\naction{{count}};\nfinally{{1}}.")
    broken = dataclasses.replace(
        ast, clauses=tuple(Clause(c.keyword, () if c.keyword == "action" else c.body) for c in ast.clauses)
    )
    with pytest.raises(ValidationError) as info:
        validate(broken)
    assert info.value.kinds == {"missing-feature"}


def test_validation_deterministic():
    ast = ast_of(match="(isShiny(?o))", action="count, count", final="actionresult(map)")
    messages = []
    for _ in range(2):
        with pytest.raises(ValidationError) as info:
            validate(ast)
        messages.append(info.value.violations)
    assert messages[0] == messages[1]


def test_blueprint_is_immutable(subclass_counter):
    with pytest.raises(dataclasses.FrozenInstanceError):
        subclass_counter.name = "Other"
    assert hash(subclass_counter) == hash(dataclasses.replace(subclass_counter))


@given(blueprints)
def test_generated_blueprints_feature_complete(b):
    assert feature_complete(b)
