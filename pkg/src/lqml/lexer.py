"""Hand-written scanner for LQML source text."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import LexError


class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    IRI_REF = "iri-ref"
    QUOTED_STRING = "quoted-string"
    NUMBER = "number"
    PUNCTUATION = "punctuation"
    LOGICAL_OPERATOR = "logical-operator"
    BOOLEAN_OPERATOR = "boolean-operator"
    COMMENT = "comment"
    EOF = "eof"  # parser sentinel only, never produced by tokenize


KEYWORDS = frozenset({
    "def", "metric", "label", "description", "match", "action", "finally",
    "typeof", "map", "count", "unique", "actionresult", "ratio",
})
VARIABLES = frozenset({"?s", "?p", "?o"})
PUNCTUATION = frozenset("{}():;,.")

# RFC 3987 excludes these from IRI references, together with whitespace
_IRI_FORBIDDEN = frozenset('<"{}|^`\\')
_STRING_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    line: int
    column: int

    @property
    def value(self) -> str:
        """The lexeme with delimiters removed and escapes resolved."""
        if self.kind is TokenKind.IRI_REF:
            return self.lexeme[1:-1]
        if self.kind is TokenKind.QUOTED_STRING:
            return _unquote(self.lexeme)
        return self.lexeme

    def describe(self) -> str:
        if self.kind is TokenKind.EOF:
            return "end of input"
        return repr(self.lexeme)


def _unquote(lexeme: str) -> str:
    body = lexeme[1:-1]
    if "\\" not in body:
        return body
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            out.append(_STRING_ESCAPES[body[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def tokenize(source: str, keep_comments: bool = False) -> list[Token]:
    """Split ``source`` into tokens.

    Comments run from ``#`` to the end of the line and are dropped unless
    ``keep_comments`` is set. ``#`` inside an IRI or a string is not a comment.
    """
    tokens: list[Token] = []
    line, line_start = 1, 0
    i, n = 0, len(source)

    while i < n:
        ch = source[i]
        col = i - line_start + 1

        if ch == "\n":
            line += 1
            i += 1
            line_start = i
            continue
        if ch in " \t\r\f﻿":
            i += 1
            continue

        if ch == "#":
            end = source.find("\n", i)
            end = n if end < 0 else end
            if keep_comments:
                tokens.append(Token(TokenKind.COMMENT, source[i:end].rstrip("\r"), line, col))
            i = end
            continue

        if ch == "<":
            j = i + 1
            while j < n and source[j] != ">":
                c = source[j]
                if c.isspace() or c in _IRI_FORBIDDEN:
                    if c.isspace() or c == "<":
                        raise LexError(line, col, "unterminated IRI reference")
                    raise LexError(line, j - line_start + 1, f"character {c!r} not allowed in IRI")
                j += 1
            if j >= n:
                raise LexError(line, col, "unterminated IRI reference")
            if j == i + 1:
                raise LexError(line, col, "empty IRI reference")
            tokens.append(Token(TokenKind.IRI_REF, source[i:j + 1], line, col))
            i = j + 1
            continue

        if ch == '"':
            j = i + 1
            while True:
                if j >= n or source[j] in "\r\n":
                    raise LexError(line, col, "unterminated string")
                c = source[j]
                if c == "\\":
                    if j + 1 >= n or source[j + 1] not in _STRING_ESCAPES:
                        raise LexError(line, j - line_start + 1, "invalid escape in string")
                    j += 2
                    continue
                if c == '"':
                    break
                j += 1
            tokens.append(Token(TokenKind.QUOTED_STRING, source[i:j + 1], line, col))
            i = j + 1
            continue

        if ch == "?":
            lexeme = source[i:i + 2]
            after = source[i + 2:i + 3]
            if lexeme not in VARIABLES or (after and (after.isalnum() or after == "_")):
                raise LexError(line, col, "expected one of ?s, ?p, ?o")
            tokens.append(Token(TokenKind.KEYWORD, lexeme, line, col))
            i += 2
            continue

        if ch.isdigit() or (ch == "-" and source[i + 1:i + 2].isdigit()):
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            if j + 1 < n and source[j] == "." and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            tokens.append(Token(TokenKind.NUMBER, source[i:j], line, col))
            i = j
            continue

        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            kind = TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, word, line, col))
            i = j
            continue

        two = source[i:i + 2]
        if two in ("&&", "||"):
            tokens.append(Token(TokenKind.LOGICAL_OPERATOR, two, line, col))
            i += 2
            continue
        if ch in "&|":
            tokens.append(Token(TokenKind.LOGICAL_OPERATOR, ch, line, col))
            i += 1
            continue
        if two == "==":
            tokens.append(Token(TokenKind.BOOLEAN_OPERATOR, two, line, col))
            i += 2
            continue
        if ch in PUNCTUATION:
            tokens.append(Token(TokenKind.PUNCTUATION, ch, line, col))
            i += 1
            continue

        raise LexError(line, col, f"illegal character {ch!r}")

    return tokens
