import io

import pytest
import rdflib
from hypothesis import given

from lqml.errors import LqmlError, NTriplesSyntaxError
from lqml.rdfio import TripleSource, open_ntriples, parse_line, parse_ntriples, serialize_ntriples
from lqml.terms import RDF_TYPE, BNode, IRI, Literal, Triple

from strategies import datasets

DOC = """\
# header comment
<http://ex.org/a> <http://ex.org/p> "lit" .

<http://ex.org/a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex.org/C> .
_:b1 <http://ex.org/p> _:b2 . # trailing comment
"""


def test_three_statements_and_comments():
    triples = parse_ntriples(DOC)
    assert len(triples) == 3
    assert triples[0].object == Literal("lit")
    assert triples[1].predicate.value == RDF_TYPE
    assert triples[2] == Triple(BNode("b1"), IRI("http://ex.org/p"), BNode("b2"))


@pytest.mark.parametrize("line, expected", [
    ('<a:s> <a:p> "x"@en-GB .', Literal("x", lang="en-GB")),
    ('<a:s> <a:p> "4"^^<http://www.w3.org/2001/XMLSchema#integer> .', Literal("4", datatype="http://www.w3.org/2001/XMLSchema#integer")),
    (r'<a:s> <a:p> "tab\there \"q\" é" .', Literal('tab\there "q" é')),
    ("<a:s> <a:p> <a:caf\\u00e9> .", IRI("a:café")),
    ("  <a:s>\t<a:p>   <a:o>.", IRI("a:o")),
])
def test_term_forms(line, expected):
    assert parse_line(line).object == expected


@pytest.mark.parametrize("line, reason", [
    ("<a:s> <a:p> .", "missing object term"),
    ("<a:s> <a:p>", "missing object term"),
    ("<a:s <a:p> <a:o> .", "IRI in subject position"),
    ('"x" <a:p> <a:o> .', "literal not allowed in subject position"),
    ("<a:s> _:p <a:o> .", "blank node not allowed in predicate position"),
    ("<a:s> <a:p> <a:o>", "expected '.'"),
    ('<a:s> <a:p> "open .', "string literal"),
    ('<a:s> <a:p> "x"^^bad .', "datatype"),
    (r'<a:s> <a:p> "bad \q" .', "escape"),
])
def test_syntax_errors(line, reason):
    with pytest.raises(NTriplesSyntaxError) as info:
        parse_line(line, 7)
    assert info.value.line == 7
    assert reason in info.value.reason


def test_error_line_numbers_are_physical():
    text = "# c\n\n<a:s> <a:p> <a:o> .\n<a:s> <a:p> .\n"
    with pytest.raises(NTriplesSyntaxError) as info:
        parse_ntriples(text)
    assert info.value.line == 4


def test_empty_source_ends_immediately():
    src = TripleSource(io.StringIO(""))
    assert src.next_triple() is None
    assert src.next_triple() is None


def test_next_triple_and_line(tmp_path):
    path = tmp_path / "d.nt"
    path.write_text(DOC)
    with open_ntriples(path) as src:
        first = src.next_triple()
        assert first.object == Literal("lit") and src.line == 2
        assert src.next_triple().object == IRI("http://ex.org/C") and src.line == 4


def test_reiteration_from_path(tmp_path):
    path = tmp_path / "d.nt"
    path.write_text(DOC)
    with open_ntriples(str(path)) as src:
        assert list(src) == list(src) == parse_ntriples(DOC)


def test_reiteration_from_seekable_streams():
    for stream in (io.StringIO(DOC), io.BytesIO(DOC.encode())):
        src = open_ntriples(stream)
        assert len(list(src)) == 3
        assert len(list(src)) == 3


class _OneShot(io.RawIOBase):
    def __init__(self, data: bytes) -> None:
        self._data = io.BytesIO(data)

    def readable(self):
        return True

    def readinto(self, b):
        chunk = self._data.read(len(b))
        b[: len(chunk)] = chunk
        return len(chunk)

    def seekable(self):
        return False


def test_non_seekable_stream_cannot_rewind():
    src = open_ntriples(io.BufferedReader(_OneShot(DOC.encode())))
    assert len(list(src)) == 3
    with pytest.raises(LqmlError):
        list(src)


@pytest.mark.parametrize("char", ["\x1c", "\x1e", "\x85", "\u2028", "\u2029", "\x0b", "\x0c"])
def test_unicode_line_separators_stay_inside_literals(char):
    text = f'<http://ex.org/a> <http://ex.org/p> "x{char}y" .\n'
    (t,) = parse_ntriples(text)
    assert t.object.lexical == f"x{char}y"


@given(datasets)
def test_serialize_parse_round_trip(triples):
    text = serialize_ntriples(triples)
    assert parse_ntriples(text) == triples


@given(datasets)
def test_rdflib_agrees(triples):
    text = serialize_ntriples(triples)
    graph = rdflib.Graph().parse(data=text, format="nt")
    assert len(graph) == len(set(triples))
