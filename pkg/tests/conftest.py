from __future__ import annotations

from pathlib import Path

import pytest

from lqml import load_blueprints
from lqml.rdfio import parse_ntriples

CORPUS = Path(__file__).parent / "corpus"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"

FIVE_TRIPLES = f"""\
<http://ex.org/a> <{RDFS}subClassOf> <http://ex.org/b> .
<http://ex.org/a> <{RDFS}subClassOf> <http://ex.org/c> .
<http://ex.org/d> <{RDFS}subClassOf> <http://ex.org/b> .
<http://ex.org/a> <{RDFS}label> "A" .
<http://ex.org/d> <{RDF_TYPE}> <http://ex.org/C> .
"""

FOUR_TRIPLES = f"""\
<http://ex.org/x> <{RDF_TYPE}> <http://www.example.org/dp#Class> .
<http://ex.org/x> <{RDFS}label> "X" .
<http://ex.org/x> <{RDFS}comment> "about X" .
<http://ex.org/y> <{RDF_TYPE}> <http://www.example.org/dp#Class> .
"""


def corpus_blueprints():
    return [
        b
        for name in ("subclass_counter.lqm", "label_ratio.lqm")
        for b in load_blueprints((CORPUS / name).read_text(encoding="utf-8"))
    ]


@pytest.fixture
def subclass_counter():
    return corpus_blueprints()[0]


@pytest.fixture
def label_ratio():
    return corpus_blueprints()[1]


@pytest.fixture
def five_triples():
    return parse_ntriples(FIVE_TRIPLES)


@pytest.fixture
def four_triples():
    return parse_ntriples(FOUR_TRIPLES)


# -- acceptance summary ------------------------------------------------------

_outcomes: dict[int, tuple[str, list[str]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes.setdefault(number, (title, []))[1].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        title, results = _outcomes[number]
        verdict = "PASS" if results and all(r == "passed" for r in results) else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title}")
