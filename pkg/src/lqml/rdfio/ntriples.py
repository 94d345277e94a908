"""Line-oriented N-Triples reader.

Each physical line holds at most one statement, so the reader never buffers
more than a single line. A source can be rewound for a second pass as long as
its origin is a path or a seekable stream.
"""
from __future__ import annotations

import io
import os
import re
from typing import IO, Iterable, Iterator, Optional, Union

from ..errors import LqmlError, NTriplesSyntaxError
from ..terms import BNode, IRI, Literal, Term, Triple

Origin = Union[str, "os.PathLike[str]", IO[str], IO[bytes]]

_IRI_CHAR = r'[^\x00-\x20<>"{}|^`\\]'
_IRI = rf"<({_IRI_CHAR}*(?:\\(?:u[0-9A-Fa-f]{{4}}|U[0-9A-Fa-f]{{8}}){_IRI_CHAR}*)*)>"
_BNODE = r"_:([\w](?:[\w.\-]*[\w\-])?)"
_STRING = r'"([^"\\\n\r]*(?:\\.[^"\\\n\r]*)*)"'
_LANG = r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)"
_WS = r"[ \t]*"

_STATEMENT = re.compile(
    rf"{_WS}(?:{_IRI}|{_BNODE}){_WS}{_IRI}{_WS}"
    rf"(?:{_IRI}|{_BNODE}|{_STRING}(?:{_LANG}|\^\^{_IRI})?){_WS}\.{_WS}(?:#.*)?"
)
_BLANK = re.compile(rf"{_WS}(?:#.*)?")

_TERM_IRI = re.compile(_IRI)
_TERM_BNODE = re.compile(_BNODE)
_TERM_STRING = re.compile(_STRING)
_TERM_LANG = re.compile(_LANG)
_TERM_WS = re.compile(_WS)

_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_ESCAPE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))", re.DOTALL)


def _unescape(text: str, line: int, allow_echar: bool) -> str:
    def repl(m: re.Match[str]) -> str:
        code = m.group(1) or m.group(2)
        if code:
            return chr(int(code, 16))
        ch = m.group(3)
        if allow_echar and ch in _ECHAR:
            return _ECHAR[ch]
        raise NTriplesSyntaxError(line, f"invalid escape sequence \\{ch}")

    return _ESCAPE.sub(repl, text)


def _iri(raw: str, line: int) -> IRI:
    return IRI(_unescape(raw, line, False) if "\\" in raw else raw)


def parse_line(text: str, line: int = 1) -> Optional[Triple]:
    """Parse one physical line. Returns ``None`` for blank and comment lines."""
    m = _STATEMENT.fullmatch(text)
    if m is None:
        if _BLANK.fullmatch(text):
            return None
        raise NTriplesSyntaxError(line, _diagnose(text))
    s_iri, s_bn, p, o_iri, o_bn, o_lex, o_lang, o_dt = m.groups()
    subject: Term = _iri(s_iri, line) if s_iri is not None else BNode(s_bn)
    obj: Term
    if o_iri is not None:
        obj = _iri(o_iri, line)
    elif o_bn is not None:
        obj = BNode(o_bn)
    else:
        lexical = _unescape(o_lex, line, True) if "\\" in o_lex else o_lex
        datatype = _iri(o_dt, line).value if o_dt is not None else None
        obj = Literal(lexical, o_lang, datatype)
    return Triple(subject, _iri(p, line), obj)


def _diagnose(text: str) -> str:
    """Explain why ``text`` is not a statement. Only used on the error path."""
    pos = _TERM_WS.match(text).end()

    def skip(at: int) -> int:
        return _TERM_WS.match(text, at).end()

    def term(at: int, what: str, literal_ok: bool) -> int:
        if at >= len(text) or text[at] in ".#":
            raise _Missing(f"missing {what} term")
        for pattern in (_TERM_IRI, _TERM_BNODE) + ((_TERM_STRING,) if literal_ok else ()):
            m = pattern.match(text, at)
            if m:
                end = m.end()
                if pattern is _TERM_STRING:
                    if text.startswith("^^", end):
                        dt = _TERM_IRI.match(text, end + 2)
                        if not dt:
                            raise _Missing("malformed datatype IRI after '^^'")
                        end = dt.end()
                    elif text.startswith("@", end):
                        lang = _TERM_LANG.match(text, end)
                        if not lang:
                            raise _Missing("malformed language tag")
                        end = lang.end()
                return end
        ch = text[at]
        if ch == "<":
            raise _Missing(f"unterminated or malformed IRI in {what} position")
        if ch == '"':
            if literal_ok:
                raise _Missing("unterminated or malformed string literal")
            raise _Missing(f"literal not allowed in {what} position")
        if text.startswith("_:", at):
            raise _Missing(f"malformed blank node label in {what} position")
        raise _Missing(f"unexpected character {ch!r} in {what} position")

    try:
        pos = skip(term(pos, "subject", False))
        if text.startswith("_:", pos):
            return "blank node not allowed in predicate position"
        if pos < len(text) and text[pos] != "<":
            if text[pos] in ".#":
                return "missing predicate term"
            return "predicate must be an IRI"
        pos = skip(term(pos, "predicate", False))
        pos = skip(term(pos, "object", True))
    except _Missing as exc:
        return str(exc)
    if pos >= len(text) or text[pos] != ".":
        return "expected '.' at end of statement"
    return "unexpected content after '.'"


class _Missing(Exception):
    pass


class TripleSource:
    """Streams triples from an N-Triples document.

    ``next_triple`` reads forward from the current position; iterating the
    source always restarts from the first line, which is how the engine makes
    its second pass. ``line`` is the 1-based physical line last read.
    """

    def __init__(self, origin: Origin) -> None:
        self.origin = origin
        self.line = 0
        self._handle: Optional[IO[str]] = None
        self._owns_handle = False
        self._started = False
        self._reader: Optional[Iterator[Triple]] = None

    def _open(self) -> IO[str]:
        origin = self.origin
        if isinstance(origin, (str, os.PathLike)):
            self._owns_handle = True
            return open(origin, encoding="utf-8", newline=None)
        if isinstance(origin, io.TextIOBase):
            return origin  # type: ignore[return-value]
        return io.TextIOWrapper(origin, encoding="utf-8", newline=None)  # type: ignore[arg-type]

    def reopen(self) -> None:
        """Position the source at line 1 again."""
        if self._handle is not None and self._owns_handle:
            self._handle.close()
            self._handle = None
        elif self._handle is not None or self._started:
            stream = self._handle if self._handle is not None else self.origin
            if not stream.seekable():  # type: ignore[union-attr]
                raise LqmlError(
                    "input stream cannot be rewound for a second pass; "
                    "spool it to a temporary file first"
                )
            stream.seek(0)  # type: ignore[union-attr]
        self.line = 0
        self._reader = None

    def _read(self) -> Iterator[Triple]:
        if self._handle is None:
            self._handle = self._open()
        self._started = True
        number = 0
        for number, text in enumerate(self._handle, 1):
            self.line = number
            triple = parse_line(text.rstrip("\r\n"), number)
            if triple is not None:
                yield triple

    def next_triple(self) -> Optional[Triple]:
        """Return the next triple, or ``None`` once the document is exhausted."""
        if self._reader is None:
            self._reader = self._read()
        return next(self._reader, None)

    def __iter__(self) -> Iterator[Triple]:
        if self._started:
            self.reopen()
        self._reader = self._read()
        return self._reader

    def close(self) -> None:
        if self._handle is not None and self._owns_handle:
            self._handle.close()
        self._handle = None

    def __enter__(self) -> "TripleSource":
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()


def open_ntriples(origin: Origin) -> TripleSource:
    return TripleSource(origin)


def parse_ntriples(text: str) -> list[Triple]:
    # str.splitlines would also break on \x1c-\x1e, \x85 and \u2028 inside literals
    lines = io.StringIO(text, newline=None)
    return list(_parse_lines(line.rstrip("\n") for line in lines))


def _parse_lines(lines: Iterable[str]) -> Iterator[Triple]:
    for number, line in enumerate(lines, 1):
        triple = parse_line(line, number)
        if triple is not None:
            yield triple


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    return "".join(f"{t}\n" for t in triples)
