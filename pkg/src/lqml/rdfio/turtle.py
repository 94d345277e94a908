"""Turtle output and a reader for the subset of Turtle this package writes.

The writer groups statements by subject, inlines blank nodes referenced
exactly once as ``[ ... ]`` and well-formed RDF lists as ``( ... )``. IRIs are
compacted to prefixed names only against declared prefixes, so every prefixed
name in the output is declared.

The reader handles prefixes, prefixed names, ``a``, ``;``/``,`` lists, blank
node property lists, collections, labelled blank nodes and string, numeric and
boolean literals. ``@base`` and relative IRI resolution are not supported.
"""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..errors import TurtleSyntaxError
from ..terms import (
    RDF_FIRST,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    BNode,
    IRI,
    Literal,
    Term,
    Triple,
    escape_string,
)

_LOCAL_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_BARE_LITERALS = {
    XSD_INTEGER: re.compile(r"[+-]?[0-9]+"),
    XSD_DECIMAL: re.compile(r"[+-]?[0-9]*\.[0-9]+"),
    XSD_BOOLEAN: re.compile(r"true|false"),
}
_IRI_ESCAPE = re.compile(r'[\x00-\x20<>"{}|^`\\]')


@dataclass
class TurtleDocument:
    prefixes: dict[str, str] = field(default_factory=dict)
    statements: list[Triple] = field(default_factory=list)

    def add(self, subject: Term, predicate: IRI, obj: Term) -> None:
        self.statements.append(Triple(subject, predicate, obj))

    def serialize(self) -> str:
        return TurtleWriter(self.prefixes).write(self.statements)


class TurtleWriter:
    def __init__(self, prefixes: dict[str, str]) -> None:
        # longest namespace first so nested namespaces compact correctly
        self._prefixes = sorted(prefixes.items(), key=lambda kv: -len(kv[1]))
        self._declared = dict(prefixes)

    def write(self, statements: Iterable[Triple]) -> str:
        statements = list(dict.fromkeys(statements))
        by_subject: dict[Term, list[Triple]] = defaultdict(list)
        refs: dict[BNode, int] = defaultdict(int)
        for t in statements:
            by_subject[t.subject].append(t)
            if isinstance(t.object, BNode):
                refs[t.object] += 1
        self._by_subject = by_subject
        self._refs = refs
        self._parent = {t.object: t.subject for t in statements if isinstance(t.object, BNode)}
        self._lists = self._find_lists(by_subject, refs)
        inline = {
            b for b, n in refs.items()
            if n == 1 and b not in self._list_members
        }
        self._inline = self._break_cycles(inline)

        out = [f"@prefix {p}: <{ns}> ." for p, ns in self._declared.items()]
        blocks = []
        for subject in by_subject:
            if subject in self._inline or subject in self._list_members:
                continue
            blocks.append(self._block(subject))
        if out and blocks:
            out.append("")
        out.extend(blocks)
        return "\n".join(out) + "\n" if out else ""

    def _find_lists(
        self, by_subject: dict[Term, list[Triple]], refs: dict[BNode, int]
    ) -> dict[BNode, list[Term]]:
        """Map each list head to its items; nodes of a list are inlined as ``( )``."""
        heads: dict[BNode, list[Term]] = {}
        self._list_members: set[BNode] = set()
        rest_targets = {
            t.object for ts in by_subject.values() for t in ts
            if t.predicate.value == RDF_REST
        }
        for node in list(by_subject):
            if not isinstance(node, BNode) or node in rest_targets or refs.get(node) != 1:
                continue
            items: list[Term] = []
            members: list[BNode] = []
            current: Term = node
            while isinstance(current, BNode) and current not in members:
                props = {t.predicate.value: t.object for t in by_subject.get(current, [])}
                if (len(by_subject.get(current, [])) != 2 or set(props) != {RDF_FIRST, RDF_REST}
                        or refs.get(current) != 1):
                    break
                members.append(current)
                items.append(props[RDF_FIRST])
                current = props[RDF_REST]
            else:
                if current == IRI(RDF_NIL) and members:
                    heads[node] = items
                    self._list_members.update(members)
        return heads

    def _break_cycles(self, inline: set[BNode]) -> set[BNode]:
        # a cycle made only of singly-referenced blank nodes has no top-level entry
        # point; label one node per cycle so it is written at top level
        inline = set(inline)
        for start in sorted(inline, key=lambda b: b.label):
            seen: list[BNode] = []
            node: Term = start
            while isinstance(node, BNode) and node in inline and node not in seen:
                seen.append(node)
                node = self._parent.get(node)  # type: ignore[assignment]
            if isinstance(node, BNode) and node in seen:
                inline.discard(node)
        return inline

    def _block(self, subject: Term) -> str:
        if isinstance(subject, BNode) and subject in self._lists:
            return self._term(subject, 0) + " ."
        triples = self._by_subject[subject]
        if isinstance(subject, BNode) and not self._refs.get(subject):
            return "[\n" + self._predicate_list(triples, 1) + "\n] ."
        return self._term(subject, 0) + "\n" + self._predicate_list(triples, 1) + " ."

    def _predicate_list(self, triples: list[Triple], depth: int) -> str:
        grouped: dict[IRI, list[Term]] = {}
        for t in triples:
            grouped.setdefault(t.predicate, []).append(t.object)
        # rdf:type first, as "a"
        order = sorted(grouped, key=lambda p: p.value != RDF_TYPE)
        indent = "    " * depth
        parts = []
        for p in order:
            verb = "a" if p.value == RDF_TYPE else self._iri(p.value)
            objs = ", ".join(self._term(o, depth) for o in grouped[p])
            parts.append(f"{indent}{verb} {objs}")
        return " ;\n".join(parts)

    def _term(self, term: Term, depth: int) -> str:
        if isinstance(term, IRI):
            if term.value == RDF_NIL:
                return "()"
            return self._iri(term.value)
        if isinstance(term, BNode):
            if term in self._lists:
                return "( " + " ".join(self._term(i, depth) for i in self._lists[term]) + " )"
            if term in self._inline:
                triples = self._by_subject.get(term)
                if not triples:
                    return "[]"
                closing = "    " * depth + "]"
                return "[\n" + self._predicate_list(triples, depth + 1) + "\n" + closing
            return f"_:{term.label}"
        return self._literal(term)

    def _iri(self, value: str) -> str:
        for prefix, ns in self._prefixes:
            if value.startswith(ns) and _LOCAL_NAME.fullmatch(value[len(ns):]):
                return f"{prefix}:{value[len(ns):]}"
        return "<" + _IRI_ESCAPE.sub(lambda m: f"\\u{ord(m.group()):04X}", value) + ">"

    def _literal(self, lit: Literal) -> str:
        if lit.datatype in _BARE_LITERALS and _BARE_LITERALS[lit.datatype].fullmatch(lit.lexical):
            return lit.lexical
        text = '"' + escape_string(lit.lexical) + '"'
        if lit.lang:
            return f"{text}@{lit.lang}"
        if lit.datatype:
            return f"{text}^^{self._iri(lit.datatype)}"
        return text


def serialize_turtle(statements: Iterable[Triple], prefixes: dict[str, str]) -> str:
    return TurtleWriter(prefixes).write(statements)


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\x00-\x20]*(?:\\[uU][0-9A-Fa-f]+[^<>"{}|^`\\\x00-\x20]*)*>)
  | (?P<long>\"\"\"(?:[^"\\]|\\.|"(?!""))*\"\"\"|'''(?:[^'\\]|\\.|'(?!''))*''')
  | (?P<string>"(?:[^"\\\n\r]|\\.)*"|'(?:[^'\\\n\r]|\\.)*')
  | (?P<lang>@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*)
  | (?P<dt>\^\^)
  | (?P<bnode>_:[\w](?:[\w.\-]*[\w\-])?)
  | (?P<number>[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.?[0-9]+[eE][+-]?[0-9]+|[0-9]*\.[0-9]+|[0-9]+))
  | (?P<pname>(?:[A-Za-z][\w\-.]*[\w\-]|[A-Za-z])?:(?:[\w\-](?:[\w\-.]*[\w\-])?)?)
  | (?P<word>[A-Za-z]+)
  | (?P<punct>[.;,\[\]()])
    """,
    re.VERBOSE,
)
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_ESCAPE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))", re.DOTALL)


def _unescape(text: str, line: int) -> str:
    def repl(m: re.Match[str]) -> str:
        code = m.group(1) or m.group(2)
        if code:
            return chr(int(code, 16))
        if m.group(3) in _ECHAR:
            return _ECHAR[m.group(3)]
        raise TurtleSyntaxError(line, f"invalid escape \\{m.group(3)}")

    return _ESCAPE.sub(repl, text)


class _TurtleParser:
    def __init__(self, text: str) -> None:
        self.tokens: list[tuple[str, str, int]] = []
        pos, line = 0, 1
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise TurtleSyntaxError(line, f"unexpected character {text[pos]!r}")
            kind = m.lastgroup or ""
            if kind != "ws":
                self.tokens.append((kind, m.group(), line))
            line += m.group().count("\n")
            pos = m.end()
        self.pos = 0
        self.doc = TurtleDocument()
        self._bnode_counter = 0

    def peek(self) -> tuple[str, str, int]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        last = self.tokens[-1][2] if self.tokens else 1
        return ("eof", "", last)

    def take(self) -> tuple[str, str, int]:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        kind, text, line = self.take()
        if text != value or kind not in ("punct", "word"):
            raise TurtleSyntaxError(line, f"expected {value!r}, found {text or 'end of input'!r}")

    def fresh(self) -> BNode:
        self._bnode_counter += 1
        return BNode(f"g{self._bnode_counter}")

    def parse(self) -> TurtleDocument:
        while self.peek()[0] != "eof":
            kind, text, line = self.peek()
            if text == "@prefix" or (kind == "word" and text.upper() == "PREFIX"):
                self.take()
                self._prefix(sparql_style=not text.startswith("@"))
            else:
                self._triples()
                self.expect(".")
        return self.doc

    def _prefix(self, sparql_style: bool) -> None:
        kind, text, line = self.take()
        if kind != "pname" or not text.endswith(":"):
            raise TurtleSyntaxError(line, f"expected prefix name, found {text!r}")
        ikind, iri, iline = self.take()
        if ikind != "iri":
            raise TurtleSyntaxError(iline, f"expected namespace IRI, found {iri!r}")
        self.doc.prefixes[text[:-1]] = _unescape(iri[1:-1], iline)
        if not sparql_style:
            self.expect(".")

    def _triples(self) -> None:
        kind, text, line = self.peek()
        if text == "[":
            subject = self._blank_property_list()
            if self.peek()[1] == ".":
                return
        else:
            subject = self._subject()
        self._predicate_object_list(subject)

    def _subject(self) -> Term:
        kind, text, line = self.peek()
        if text == "(":
            return self._collection()
        term = self._term()
        if isinstance(term, Literal):
            raise TurtleSyntaxError(line, "literal in subject position")
        return term

    def _predicate_object_list(self, subject: Term) -> None:
        while True:
            kind, text, line = self.take()
            if kind == "word" and text == "a":
                predicate = IRI(RDF_TYPE)
            elif kind in ("iri", "pname"):
                predicate = self._named(kind, text, line)
            else:
                raise TurtleSyntaxError(line, f"expected predicate, found {text or 'end of input'!r}")
            while True:
                self.doc.add(subject, predicate, self._object())
                if self.peek()[1] != ",":
                    break
                self.take()
            if self.peek()[1] != ";":
                return
            while self.peek()[1] == ";":
                self.take()
            if self.peek()[1] in (".", "]"):
                return

    def _object(self) -> Term:
        text = self.peek()[1]
        if text == "[":
            return self._blank_property_list()
        if text == "(":
            return self._collection()
        return self._term()

    def _blank_property_list(self) -> BNode:
        self.expect("[")
        node = self.fresh()
        if self.peek()[1] != "]":
            self._predicate_object_list(node)
        self.expect("]")
        return node

    def _collection(self) -> Term:
        self.expect("(")
        items: list[Term] = []
        while self.peek()[1] != ")":
            if self.peek()[0] == "eof":
                raise TurtleSyntaxError(self.peek()[2], "unterminated collection")
            items.append(self._object())
        self.take()
        head: Term = IRI(RDF_NIL)
        for item in reversed(items):
            node = self.fresh()
            self.doc.add(node, IRI(RDF_FIRST), item)
            self.doc.add(node, IRI(RDF_REST), head)
            head = node
        return head

    def _named(self, kind: str, text: str, line: int) -> IRI:
        if kind == "iri":
            return IRI(_unescape(text[1:-1], line))
        prefix, _, local = text.partition(":")
        if prefix not in self.doc.prefixes:
            raise TurtleSyntaxError(line, f"undeclared prefix {prefix!r}")
        return IRI(self.doc.prefixes[prefix] + local)

    def _term(self) -> Term:
        kind, text, line = self.take()
        if kind in ("iri", "pname"):
            return self._named(kind, text, line)
        if kind == "bnode":
            return BNode(text[2:])
        if kind == "number":
            if "e" in text.lower():
                return Literal(text, datatype=XSD_DOUBLE)
            return Literal(text, datatype=XSD_DECIMAL if "." in text else XSD_INTEGER)
        if kind == "word" and text in ("true", "false"):
            return Literal(text, datatype=XSD_BOOLEAN)
        if kind in ("string", "long"):
            quote = 3 if kind == "long" else 1
            lexical = _unescape(text[quote:-quote], line)
            nkind, ntext, nline = self.peek()
            if nkind == "lang":
                self.take()
                return Literal(lexical, lang=ntext[1:])
            if nkind == "dt":
                self.take()
                dkind, dtext, dline = self.take()
                if dkind not in ("iri", "pname"):
                    raise TurtleSyntaxError(dline, "expected datatype IRI after '^^'")
                return Literal(lexical, datatype=self._named(dkind, dtext, dline).value)
            return Literal(lexical)
        raise TurtleSyntaxError(line, f"unexpected {text or 'end of input'!r}")


def parse_turtle(text: str) -> TurtleDocument:
    """Parse Turtle text into prefixes and a flat statement list.

    Anonymous nodes get fresh labels ``g1``, ``g2``, ... in document order.
    """
    return _TurtleParser(text).parse()
