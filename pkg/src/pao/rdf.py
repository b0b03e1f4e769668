"""Terms, triples, snapshots and traces.

Snapshots are immutable; an update produces a new snapshot and leaves the
input untouched, so a trace keeps random access to every historical state.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .errors import ParseError, UnboundVariable


@dataclass(frozen=True, order=True)
class IRI:
    prefix: str
    local: str

    def __post_init__(self):
        if not self.local or re.search(r"\s", self.local):
            raise ValueError(f"bad local name {self.local!r}")

    def __str__(self):
        return f"{self.prefix}:{self.local}" if self.prefix else self.local


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self):
        return f"?{self.name}"


@dataclass(frozen=True, order=True)
class Anon:
    """A discourse object minted while reading a factual text."""

    n: int

    def __str__(self):
        return f"obj{self.n}"


Term = Union[IRI, Var, Anon]

RDF_TYPE = IRI("rdf", "type")


def term_key(t: Term):
    # total order across kinds: anonymous ids, then iris, then variables
    if isinstance(t, Anon):
        return (0, "", t.n)
    if isinstance(t, IRI):
        return (1, str(t), 0)
    return (2, t.name, 0)


_ANON_RE = re.compile(r"^[Oo]bj(\d+)$")


def parse_term(text: str) -> Term:
    """Parse ``obj4``, ``<obj4>``, ``?x``, ``rdf:type`` or ``stores``."""
    s = text.strip()
    if s.startswith("<") and s.endswith(">"):
        s = s[1:-1]
    if not s:
        raise ParseError(f"empty term in {text!r}")
    if s.startswith("?"):
        return Var(s[1:])
    m = _ANON_RE.match(s)
    if m:
        return Anon(int(m.group(1)))
    if ":" in s:
        prefix, local = s.split(":", 1)
        return IRI(prefix, local)
    return IRI("", s)


@dataclass(frozen=True, order=True)
class Triple:
    s: Term
    p: IRI
    o: Term

    def __iter__(self):
        return iter((self.s, self.p, self.o))

    def is_ground(self):
        return not any(isinstance(t, Var) for t in self)

    def __str__(self):
        return " ".join(str(x) if isinstance(x, Var) else f"<{x}>" for x in self)


def triple_key(t: Triple):
    return (term_key(t.s), term_key(t.p), term_key(t.o))


def sort_triples(triples: Iterable[Triple]) -> list[Triple]:
    return sorted(triples, key=triple_key)


@dataclass(frozen=True)
class Snapshot:
    label: str
    triples: frozenset = frozenset()
    implicit: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "triples", frozenset(self.triples))
        object.__setattr__(self, "implicit", frozenset(self.implicit))
        if not self.implicit <= self.triples:
            raise ValueError("implicit triples must be a subset of the snapshot")
        for t in self.triples:
            if not t.is_ground():
                raise ValueError(f"variable in stored triple {t}")

    def __contains__(self, t):
        return t in self.triples

    def __len__(self):
        return len(self.triples)

    def relabel(self, label):
        return Snapshot(label, self.triples, self.implicit)

    def terms(self) -> set:
        out = set()
        for t in self.triples:
            out.update(t)
        return out


@dataclass(frozen=True)
class Filter:
    """Inequality filter ``left != right``."""

    left: Term
    right: Term

    def holds(self, b: Mapping) -> bool:
        left, right = ground_term(self.left, b), ground_term(self.right, b)
        if isinstance(left, Var) or isinstance(right, Var):
            return False
        return left != right

    def __str__(self):
        show = lambda x: str(x) if isinstance(x, Var) else f"<{x}>"
        return f"FILTER ({show(self.left)} != {show(self.right)})"


@dataclass(frozen=True)
class UpdateOp:
    """A compiled DELETE/INSERT/WHERE statement.

    ``checks`` are fully ground precondition atoms the executor must find
    true (or plan); ``absent`` patterns must not match.
    """

    deletes: tuple = ()
    inserts: tuple = ()
    where: tuple = ()
    filters: tuple = ()
    checks: tuple = ()
    absent: tuple = ()
    provenance: str = "explicit"
    source: str = ""

    def variables(self) -> set:
        out = set()
        for t in (*self.deletes, *self.inserts, *self.where, *self.checks, *self.absent):
            out.update(x for x in t if isinstance(x, Var))
        return out

    def constants(self) -> set:
        out = set()
        for t in (*self.deletes, *self.inserts, *self.where, *self.checks):
            out.update(x for x in (t.s, t.o) if isinstance(x, Anon))
        return out

    def is_empty(self):
        return not (self.deletes or self.inserts)

    def __str__(self):
        return render_op(self)


def render_op(op: UpdateOp) -> str:
    def block(ts):
        return "{" + ". ".join(str(t) for t in ts) + "}"

    parts = []
    if op.deletes:
        parts.append("DELETE " + block(op.deletes))
    if op.inserts:
        parts.append("INSERT " + block(op.inserts))
    if op.where or op.filters:
        body = ". ".join([str(t) for t in op.where] + [str(f) for f in op.filters])
        parts.append("WHERE {" + body + "}")
    return " ".join(parts)


Bindings = dict


def ground_term(t: Term, b: Mapping) -> Term:
    if isinstance(t, Var):
        return b.get(t, t)
    return t


def ground(t: Triple, b: Mapping) -> Triple:
    return Triple(ground_term(t.s, b), ground_term(t.p, b), ground_term(t.o, b))


def _triples_of(source) -> frozenset:
    return source.triples if isinstance(source, Snapshot) else frozenset(source)


def _unify(pattern: Triple, fact: Triple, b: dict):
    out = dict(b)
    for pt, ft in zip(pattern, fact):
        if isinstance(pt, Var):
            cur = out.get(pt)
            if cur is None:
                out[pt] = ft
            elif cur != ft:
                return None
        elif pt != ft:
            return None
    return out


def _binding_key(b: Mapping):
    return tuple((v.name, term_key(t)) for v, t in sorted(b.items(), key=lambda kv: kv[0].name))


def match_pattern(snapshot, patterns: Iterable[Triple], filters: Iterable[Filter] = (),
                  initial: Mapping | None = None) -> list[dict]:
    """Every binding under which all patterns ground to stored triples.

    Results are deduplicated and sorted; an empty pattern yields the single
    (initial) binding.
    """
    triples = _triples_of(snapshot)
    patterns = list(patterns)
    filters = list(filters)
    if not patterns and filters and initial is None:
        raise ValueError("filters need a non-empty pattern")
    # most constrained pattern first keeps the join small
    patterns.sort(key=lambda p: sum(isinstance(x, Var) for x in p))
    results = []

    def walk(i, b):
        if i == len(patterns):
            if all(f.holds(b) for f in filters):
                results.append(b)
            return
        pat = ground(patterns[i], b)
        if pat.is_ground():
            if pat in triples:
                walk(i + 1, b)
            return
        for fact in triples:
            nb = _unify(pat, fact, b)
            if nb is not None:
                walk(i + 1, nb)

    walk(0, dict(initial or {}))
    uniq = {_binding_key(b): b for b in results}
    return [uniq[k] for k in sorted(uniq)]


def apply_update(snapshot: Snapshot, op: UpdateOp, bindings: Mapping | None = None,
                 label: str | None = None) -> Snapshot:
    """Apply ``op`` to ``snapshot``; deletes go before inserts."""
    bindings = dict(bindings or {})
    if op.where:
        solutions = match_pattern(snapshot, op.where, op.filters, initial=bindings)
    else:
        solutions = [bindings]
    deletes, inserts = set(), set()
    for b in solutions:
        for pat in op.deletes:
            t = ground(pat, b)
            if not t.is_ground():
                raise UnboundVariable(f"unbound variable in delete {pat}")
            deletes.add(t)
        for pat in op.inserts:
            t = ground(pat, b)
            if not t.is_ground():
                raise UnboundVariable(f"unbound variable in insert {pat}")
            inserts.add(t)
    triples = (snapshot.triples - deletes) | inserts
    implicit = snapshot.implicit - deletes
    if op.provenance == "explicit":
        implicit -= inserts
    else:
        implicit |= inserts - snapshot.triples
    return Snapshot(snapshot.label if label is None else label, triples, implicit)


@dataclass(frozen=True)
class Trace:
    snapshots: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "snapshots", tuple(self.snapshots))
        labels = [s.label for s in self.snapshots]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate step labels in {labels}")

    def __len__(self):
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)

    def __getitem__(self, i):
        return self.snapshots[i]

    @property
    def labels(self):
        return [s.label for s in self.snapshots]

    def at(self, label) -> Snapshot:
        for s in self.snapshots:
            if s.label == label:
                return s
        raise KeyError(label)

    def index(self, label) -> int:
        return self.labels.index(label)

    def to_json(self) -> dict:
        def rows(ts):
            return [[str(x) for x in t] for t in sort_triples(ts)]

        return {"steps": [{"label": s.label, "triples": rows(s.triples),
                           "implicit": rows(s.implicit)} for s in self.snapshots]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, doc: dict) -> "Trace":
        def rows(rs):
            out = []
            for r in rs:
                s, p, o = (parse_term(x) for x in r)
                out.append(Triple(s, p, o))
            return out

        return cls(tuple(Snapshot(step["label"], rows(step["triples"]), rows(step.get("implicit", [])))
                         for step in doc["steps"]))

    @classmethod
    def loads(cls, text: str) -> "Trace":
        return cls.from_json(json.loads(text))

    def to_quads(self) -> str:
        lines = []
        for s in self.snapshots:
            for t in sort_triples(s.triples):
                lines.append(f"{t.s} {t.p} {t.o} {s.label} .")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_quads(cls, text: str) -> "Trace":
        order, steps = [], {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.rstrip(".").split()
            if len(parts) != 4:
                raise ParseError(f"bad quad line {line!r}")
            s, p, o, label = parts
            if label not in steps:
                order.append(label)
                steps[label] = []
            steps[label].append(Triple(parse_term(s), parse_term(p), parse_term(o)))
        return cls(tuple(Snapshot(lb, steps[lb]) for lb in order))


def step_labels(n: int) -> list[str]:
    """A, B, ... Z then S27, S28, ..."""
    return [chr(ord("A") + i) if i < 26 else f"S{i + 1}" for i in range(n)]
