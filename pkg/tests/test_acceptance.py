"""Exit criteria. Each test carries an ``acceptance`` marker; the summary at the
end of the run prints one PASS/FAIL line per criterion."""
import json
import random
import subprocess
import sys
import textwrap
import time
from datetime import datetime, timezone
from fractions import Fraction

import pytest

import oracle
import sparql_reference
from conftest import CORPUS, FIVE_TRIPLES, FOUR_TRIPLES, corpus_blueprints
from datagen import random_blueprint, random_dataset
from lqml import errors
from lqml.engine import ObservationRecord, TypeIndex, assess, eval_condition
from lqml.lbo import export_to_lbo, export_turtle, import_document, import_from_lbo
from lqml.model import Position, TypeOf, default_registry
from lqml.parser import format_ast, load_blueprints, parse_source
from lqml.rdfio import parse_ntriples, parse_turtle
from lqml.sparql import to_sparql
from test_lbo import statement_multiset

WHEN = datetime(2024, 1, 1, tzinfo=timezone.utc)


@pytest.mark.acceptance(1, "grammar corpus parses, round-trips, and negative fixtures raise their error class (< 1 s)")
def test_grammar_corpus():
    start = time.perf_counter()
    for name in ("subclass_counter.lqm", "label_ratio.lqm"):
        source = (CORPUS / name).read_text()
        asts = parse_source(source)
        blueprints = load_blueprints(source)
        assert len(asts) == len(blueprints) == 1
        assert parse_source("\n".join(format_ast(a) for a in asts)) == asts

    invalid = CORPUS / "invalid"
    manifest = json.loads((invalid / "manifest.json").read_text())
    assert len(manifest) >= 10
    covered = set()
    registry = default_registry()
    for name, (error_name, kind) in manifest.items():
        expected = getattr(errors, error_name)
        with pytest.raises(expected) as info:
            load_blueprints((invalid / name).read_text(), registry)
        assert type(info.value) is expected, name
        if kind is not None:
            assert kind in info.value.kinds, name
            covered.add(kind)
        covered.add(error_name)
    assert {"ParseError", "MixedOperatorError", "unknown-function", "unbacked-actionresult"} <= covered
    assert time.perf_counter() - start < 1.0


@pytest.mark.acceptance(2, "subclass counter on the 5-triple fixture is exactly 1.5; label ratio on the 4-triple fixture is exactly 2.0")
def test_end_to_end_values():
    subclass_counter, label_ratio = corpus_blueprints()
    five, four = parse_ntriples(FIVE_TRIPLES), parse_ntriples(FOUR_TRIPLES)
    assert oracle.value(subclass_counter, five) == Fraction(3, 2)
    assert oracle.value(label_ratio, four) == Fraction(2)
    (r2,) = assess([subclass_counter], five, "five", computed_at=WHEN)
    (r3,) = assess([label_ratio], four, "four", computed_at=WHEN)
    assert r2.value == Fraction(3, 2) and r2.decimal == "1.5"
    assert r3.value == Fraction(2) and r3.decimal == "2.0"


@pytest.mark.acceptance(3, "records identical across 200 permutations of a 30-triple dataset (< 10 s)")
def test_stream_order_invariance():
    rng = random.Random(3)
    data = random_dataset(rng, 30)
    blueprints = corpus_blueprints()
    start = time.perf_counter()
    baseline = assess(blueprints, data, "random", computed_at=WHEN)
    assert all(isinstance(r, ObservationRecord) for r in baseline)
    for _ in range(200):
        shuffled = list(data)
        rng.shuffle(shuffled)
        assert assess(blueprints, shuffled, "random", computed_at=WHEN) == baseline
    assert time.perf_counter() - start < 10.0


@pytest.mark.acceptance(4, "engine equals the brute-force oracle on 150 random (blueprint, dataset <= 50 triples) pairs")
def test_oracle_equivalence():
    rng = random.Random(4)
    for i in range(150):
        bp = random_blueprint(rng, i)
        data = random_dataset(rng, rng.randrange(51))
        (outcome,) = assess([bp], data, "d", computed_at=WHEN)
        got = outcome.value if isinstance(outcome, ObservationRecord) else None
        assert got == oracle.value(bp, data), (bp, data)


@pytest.mark.acceptance(5, "LBO export/import is the identity and Turtle reparses to the same statement multiset")
def test_lbo_round_trip():
    rng = random.Random(5)
    blueprints = corpus_blueprints() + [random_blueprint(rng, i) for i in range(100)]
    for b in blueprints:
        graph = export_to_lbo(b)
        assert import_from_lbo(graph) == b
        text = export_turtle([b])
        assert import_document(text) == [b]
        reparsed = parse_turtle(text).statements
        assert statement_multiset(reparsed) == statement_multiset(graph.statements)


@pytest.mark.acceptance(6, "SPARQL translation selects exactly the matched triples; typeof(?s)==<U> emits ?s a <U>")
def test_sparql_soundness():
    rng = random.Random(6)
    datasets = [parse_ntriples(FIVE_TRIPLES), parse_ntriples(FOUR_TRIPLES)]
    datasets += [random_dataset(rng, rng.randrange(51)) for _ in range(20)]
    for b in corpus_blueprints():
        query = to_sparql(b.match_expr).text
        for data in datasets:
            index = TypeIndex.build(data)
            expected = {t for t in data if eval_condition(b.match_expr, t, index)}
            assert sparql_reference.select(query, sparql_reference.load(data)) == expected
    anchor = to_sparql(TypeOf(Position.SUBJECT, "http://ex.org/U")).text
    assert "?s a <http://ex.org/U>" in anchor


SCALE_SCRIPT = textwrap.dedent("""
    import json, resource, sys, time
    from lqml import load_blueprints, open_ntriples
    from lqml.engine import assess
    blueprints = [b for p in sys.argv[2:] for b in load_blueprints(open(p).read())]
    start = time.perf_counter()
    with open_ntriples(sys.argv[1]) as source:
        outcomes = assess(blueprints, source, "scale")
    elapsed = time.perf_counter() - start
    print(json.dumps({
        "seconds": elapsed,
        "peak_mb": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024,
        "values": [getattr(o, "decimal", None) for o in outcomes],
    }))
""")


@pytest.mark.acceptance(7, "1,000,000-triple N-Triples file: both corpus blueprints in < 60 s with peak memory < 100 MB")
def test_streaming_scale(tmp_path):
    from datagen import write_scale_file

    dataset = tmp_path / "scale.nt"
    with dataset.open("w") as out:
        write_scale_file(out, 1_000_000)
    assert sum(1 for _ in dataset.open()) == 1_000_000
    proc = subprocess.run(
        [sys.executable, "-c", SCALE_SCRIPT, str(dataset), str(CORPUS / "subclass_counter.lqm"), str(CORPUS / "label_ratio.lqm")],
        capture_output=True, text=True, check=True,
    )
    report = json.loads(proc.stdout)
    print(f"scale run: {report['seconds']:.1f} s, peak {report['peak_mb']:.1f} MB, values {report['values']}")
    assert all(v is not None for v in report["values"])
    assert report["seconds"] < 60
    assert report["peak_mb"] < 100
