"""Ontological (TBox) sentences to axioms.

A hand-written recursive-descent grammar over a fixed set of sentence
patterns::

    Every NP VP.            No NP VP.            Everything REL VP.
    If X VERB Y then X VERB Y.

with relative clauses (``that is not involved by something that is a
we:NATO or that is a ee:Warsaw_Pact``), passive verbs as inverse roles and
brace-list prefixes (``{we,ee}:country``).
"""

from __future__ import annotations

import re
from pathlib import Path

from ..dl import (And, Disjoint, Equivalent, Exists, MicroOntology, Named, Not, Or, SubClass,
                  SubProperty, Top, conj, disj, expand_brace_list)
from ..errors import ParseError, UnknownPrefix
from .morph import participle_to_property, third_person

_TOKEN_RE = re.compile(r"\{[^}]*\}:[A-Za-z_][\w-]*|[A-Za-z_][\w-]*:[A-Za-z_][\w-]*|[A-Za-z_][\w-]*|\.|\S")
_NUMBERING_RE = re.compile(r"^\s*\d+(\.\d+)*\s+")
_HEADER_RE = re.compile(r'^@prefix\s+(\S+)\s+<?([^\s>]+)>?\s+"([^"]+)"\s*$')

ARTICLES = {"a", "an"}
KEYWORDS = {"every", "no", "everything", "something", "that", "is", "not", "a", "an", "or",
            "and", "by", "if", "then", "does"}


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


def split_sentences(tokens):
    out, cur = [], []
    for t in tokens:
        if t == ".":
            if cur:
                out.append(cur)
            cur = []
        else:
            cur.append(t)
    if cur:
        raise ParseError("sentence is not terminated by a period", expected={"."})
    return out


class _SentenceParser:
    def __init__(self, tokens, prefix, index, known_prefixes, known_properties):
        self.toks = tokens
        self.i = 0
        self.prefix = prefix
        self.index = index
        self.known_prefixes = known_prefixes
        self.known_properties = known_properties

    # -- token helpers ---------------------------------------------------
    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def low(self, k=0):
        t = self.peek(k)
        return t.lower() if t else None

    def next(self):
        t = self.peek()
        if t is None:
            self.fail("unexpected end of sentence", {"<word>"})
        self.i += 1
        return t

    def expect(self, *words):
        t = self.next()
        if t.lower() not in words:
            self.fail(f"unexpected {t!r}", set(words))
        return t

    def fail(self, msg, expected=None):
        raise ParseError(msg, sentence_index=self.index, expected=expected)

    # -- grammar ---------------------------------------------------------
    def sentence(self):
        w = self.low()
        if w == "every":
            self.next()
            head = self.np()
            return SubClass(head, self.vp())
        if w == "no":
            self.next()
            head = self.np()
            return Disjoint(head, self.vp())
        if w == "everything":
            self.next()
            head = self.rel_clause()
            return SubClass(head, self.vp())
        if w == "if":
            return self.subproperty()
        self.fail(f"unexpected {self.peek()!r}", {"Every", "No", "Everything", "If"})

    def subproperty(self):
        self.expect("if")
        x = self.next()
        sub = self.verb()
        y = self.next()
        self.expect("then")
        if self.next() != x:
            self.fail("variables of the two clauses differ")
        sup = self.verb()
        if self.next() != y:
            self.fail("variables of the two clauses differ")
        return SubProperty(sub, sup)

    def verb(self):
        t = self.next()
        if t.lower() in KEYWORDS or ":" in t:
            self.fail(f"expected a verb, got {t!r}", {"<verb>"})
        return t

    def class_ref(self):
        t = self.next()
        if t.lower() in KEYWORDS or not re.match(r"^[\w{]", t):
            self.fail(f"expected a class name, got {t!r}", {"<noun>"})
        if t.startswith("{"):
            prefs, local = t[1:].split("}:", 1)
            return expand_brace_list([p.strip() for p in prefs.split(",")], local, self.known_prefixes)
        if ":" in t:
            p, local = t.split(":", 1)
            if self.known_prefixes is not None and p not in self.known_prefixes:
                raise UnknownPrefix(f"unknown ontology prefix {p!r}", sentence_index=self.index)
            return Named(t)
        return Named(f"{self.prefix}:{t}")

    def np(self):
        """Class name optionally followed by a relative clause."""
        if self.low() == "something":
            self.next()
            return self.rel_clause() if self.low() == "that" else Top
        head = self.class_ref()
        if self.low() == "that":
            return conj([head, self.rel_clause()])
        return head

    def obj(self):
        if self.low() in ARTICLES:
            self.next()
            return self.np()
        if self.low() == "something":
            return self.np()
        self.fail(f"unexpected {self.peek()!r}", {"a", "an", "something"})

    def rel_clause(self):
        self.expect("that")
        parts = [self.rel_body()]
        ops = set()
        while self.low() in ("or", "and") and self.low(1) == "that":
            ops.add(self.next().lower())
            self.next()
            parts.append(self.rel_body())
        if len(ops) > 1:
            self.fail("mixed 'and'/'or' in one relative clause")
        return disj(parts) if ops == {"or"} else conj(parts)

    def rel_body(self):
        # object relative: "that something hasMother", "that a Bottle contains"
        if self.low() == "something" or self.low() in ARTICLES:
            filler = self.obj() if self.low() in ARTICLES else self._something_plain()
            prop = self.verb()
            return Exists(prop, True, filler)
        return self.vp()

    def _something_plain(self):
        self.expect("something")
        return Top

    def vp(self):
        w = self.low()
        if w == "is":
            self.next()
            negated = False
            if self.low() == "not":
                self.next()
                negated = True
            if self.low() in ARTICLES:
                self.next()
                expr = self.np()
            elif self.low() == "something":
                expr = self.np()
            elif self.low(1) == "by":
                part = self.next()
                self.expect("by")
                prop = participle_to_property(part, self.known_properties)
                expr = Exists(prop, True, self.obj())
            else:
                self.fail(f"unexpected {self.peek()!r}", {"a", "an", "something", "<participle> by"})
            return Not(expr) if negated else expr
        if w == "does":
            self.next()
            self.expect("not")
            prop = third_person(self.verb())
            return Not(Exists(prop, False, self.obj()))
        prop = self.verb()
        return Exists(prop, False, self.obj())

    def parse(self):
        ax = self.sentence()
        if self.peek() is not None:
            self.fail(f"trailing tokens from {self.peek()!r}", {"."})
        return ax


_ACTIVE_VERB_RE = re.compile(r"\b(?:that|X|[Ee]very\s+\S+)\s+([a-z]\w*s)\s+(?:a|an|something|Y)\b")


def _active_verbs(text):
    return {m.group(1) for m in _ACTIVE_VERB_RE.finditer(text)} - {"is"}


def parse_ontological(text: str, prefix: str, known_prefixes=None, known_properties=()) -> list:
    """Parse ontological sentences (one or two per line) into axioms.

    A line holding ``Every X is a Y. Every Y is a X.`` yields one
    ``Equivalent`` axiom.
    """
    known_properties = set(known_properties) | _active_verbs(text)
    axioms = []
    index = 0
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("@prefix"):
            continue
        line = _NUMBERING_RE.sub("", line)
        parsed = []
        for sent in split_sentences(tokenize(line)):
            index += 1
            parsed.append(_SentenceParser(sent, prefix, index, known_prefixes, known_properties).parse())
        if (len(parsed) == 2 and all(isinstance(a, SubClass) for a in parsed)
                and parsed[0].sub == parsed[1].sup and parsed[0].sup == parsed[1].sub):
            axioms.append(Equivalent(parsed[0].sub, parsed[0].sup))
        else:
            axioms.extend(parsed)
    return axioms


def read_header(text: str):
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _HEADER_RE.match(line)
        if not m:
            raise ParseError("first line must be: @prefix <id> <iri> \"<Title>\"")
        return m.group(1), m.group(2), m.group(3)
    raise ParseError("empty ontology file")


def load_ontology(text: str, known_prefixes=None, known_properties=()) -> MicroOntology:
    prefix, iri, title = read_header(text)
    axioms = parse_ontological(text, prefix, known_prefixes, known_properties)
    return MicroOntology(prefix, iri, title, tuple(axioms), source=text)


def load_ontology_file(path, known_prefixes=None, known_properties=()) -> MicroOntology:
    return load_ontology(Path(path).read_text(encoding="utf-8"), known_prefixes, known_properties)


def load_ontologies(paths_or_texts) -> list[MicroOntology]:
    """Load several ontologies, checking cross-references between their prefixes."""
    texts = [Path(p).read_text(encoding="utf-8") if not isinstance(p, str) or "\n" not in p else p
             for p in paths_or_texts]
    prefixes = {read_header(t)[0] for t in texts}
    props = set()
    for t in texts:
        props |= _active_verbs(t)
    return [load_ontology(t, prefixes, props) for t in texts]
