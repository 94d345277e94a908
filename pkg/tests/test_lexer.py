import pytest
from hypothesis import given, strategies as st

from lqml.errors import LexError
from lqml.lexer import TokenKind, tokenize

from conftest import CORPUS


def kinds(source):
    return [(t.kind, t.lexeme) for t in tokenize(source)]


def test_definition_header():
    assert kinds("def{Name}:") == [
        (TokenKind.KEYWORD, "def"),
        (TokenKind.PUNCTUATION, "{"),
        (TokenKind.IDENTIFIER, "Name"),
        (TokenKind.PUNCTUATION, "}"),
        (TokenKind.PUNCTUATION, ":"),
    ]


def test_condition_tokens():
    toks = kinds('(?o == "x y") && (?p == <http://ex.org/p>) || (?o == -4.25)')
    assert (TokenKind.QUOTED_STRING, '"x y"') in toks
    assert (TokenKind.LOGICAL_OPERATOR, "&&") in toks
    assert (TokenKind.LOGICAL_OPERATOR, "||") in toks
    assert (TokenKind.IRI_REF, "<http://ex.org/p>") in toks
    assert (TokenKind.NUMBER, "-4.25") in toks
    assert (TokenKind.BOOLEAN_OPERATOR, "==") in toks
    assert (TokenKind.KEYWORD, "?o") in toks


def test_single_operators():
    assert [t.lexeme for t in tokenize("& |")] == ["&", "|"]


def test_positions_are_one_based():
    toks = tokenize("def{A}:\n  metric{<http://x.org/m>}")
    metric = toks[5]
    assert (metric.lexeme, metric.line, metric.column) == ("metric", 2, 3)
    iri = toks[7]
    assert (iri.line, iri.column) == (2, 10)


def test_comments_dropped_unless_requested():
    src = "# heading\ncount # trailing\n"
    assert [t.lexeme for t in tokenize(src)] == ["count"]
    comments = [t for t in tokenize(src, keep_comments=True) if t.kind is TokenKind.COMMENT]
    assert [c.lexeme for c in comments] == ["# heading", "# trailing"]


def test_hash_inside_iri_and_string_is_not_comment():
    toks = tokenize('<http://ex.org/a#b> "x # y"')
    assert [t.value for t in toks] == ["http://ex.org/a#b", "x # y"]


def test_string_escapes():
    (tok,) = tokenize(r'"say \"hi\"\n\\"')
    assert tok.value == 'say "hi"\n\\'


@pytest.mark.parametrize(
    "source, message",
    [
        ('"open', "unterminated string"),
        ("<http://ex.org/a", "unterminated IRI"),
        ("<http://ex .org>", "unterminated IRI"),
        ("<http://ex.org/{x}>", "not allowed in IRI"),
        ("<>", "empty IRI"),
        (r'"bad \q"', "invalid escape"),
        ("?x", "expected one of ?s, ?p, ?o"),
        ("@", "illegal character"),
    ],
)
def test_lex_errors(source, message):
    with pytest.raises(LexError) as info:
        tokenize(source)
    assert message in str(info.value)


def test_lex_error_position():
    with pytest.raises(LexError) as info:
        tokenize('count\n   "unterminated')
    assert (info.value.line, info.value.column) == (2, 4)


def test_corpus_tokens_cover_source():
    for path in CORPUS.glob("*.lqm"):
        for tok in tokenize(path.read_text(), keep_comments=True):
            assert tok.lexeme
            assert tok.line >= 1 and tok.column >= 1


@given(st.text(alphabet='def{}():;,.?spo=&|<>"#\n \\0123456789abcxyz-_/', max_size=60))
def test_tokenize_total(source):
    # any input either tokenizes or raises LexError; nothing else escapes
    try:
        toks = tokenize(source, keep_comments=True)
    except LexError as exc:
        assert exc.line >= 1 and exc.column >= 1
        return
    lines = source.split("\n")
    for tok in toks:
        assert tok.lexeme
        assert lines[tok.line - 1][tok.column - 1:].startswith(tok.lexeme)
