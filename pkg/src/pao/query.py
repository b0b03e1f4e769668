"""Temporal queries over a trace: ``WHERE-AT-STEP`` blocks.

Non-type patterns of a block match the snapshot its selector picks.  Class
membership is treated as rigid: an ``rdf:type`` pattern holds if the type
was recorded in any snapshot up to the query's vantage step (closed under
named superclasses of the ontology).  The vantage step is the last step,
except for queries projecting the step variable, where it is the step
variable's own value.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .dl import And, Equivalent, Named, SubClass
from .errors import ParseError
from .rdf import IRI, RDF_TYPE, Filter, Term, Trace, Triple, Var, match_pattern, parse_term, term_key

_TOKEN_RE = re.compile(r"<[^>]*>|\?[\w-]+(?:\+\d+)?|!=|[{}().*,]|[^\s{}().,*<>]+")
MAX_OFFSET = 3


@dataclass(frozen=True)
class Selector:
    kind: str                 # var | offset | any | min | label
    var: str | None = None
    offset: int = 0
    label: str | None = None

    def __str__(self):
        if self.kind == "var":
            return f"?{self.var}"
        if self.kind == "offset":
            return f"?{self.var}+{self.offset}"
        if self.kind == "label":
            return self.label
        return self.kind


@dataclass(frozen=True)
class Block:
    selector: Selector
    patterns: tuple
    filters: tuple = ()

    def variables(self) -> set:
        return {x.name for t in self.patterns for x in t if isinstance(x, Var)}


@dataclass(frozen=True)
class TemporalQuery:
    projection: tuple | None          # None means SELECT *
    blocks: tuple
    text: str = field(default="", compare=False)

    @property
    def step_var(self):
        for b in self.blocks:
            if b.selector.kind in ("var", "offset"):
                return b.selector.var
        return None

    @property
    def is_existence(self) -> bool:
        return self.projection is None


@dataclass(frozen=True)
class AnswerSet:
    variables: tuple
    rows: tuple                       # tuples of values aligned with ``variables``
    existence: bool = False

    def __bool__(self):
        return bool(self.rows)

    def as_dicts(self):
        return [dict(zip(self.variables, r)) for r in self.rows]


# -- parsing --------------------------------------------------------------------------

class _QueryParser:
    def __init__(self, text):
        self.toks = _TOKEN_RE.findall(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of query")
        self.i += 1
        return t

    def expect(self, tok):
        t = self.next()
        if t.upper() != tok.upper():
            raise ParseError(f"expected {tok!r}, got {t!r}", expected={tok})
        return t

    def selector(self) -> Selector:
        self.expect("(")
        t = self.next()
        self.expect(")")
        m = re.fullmatch(r"\?([\w-]+)(?:\+(\d+))?", t)
        if m:
            if m.group(2) is None:
                return Selector("var", m.group(1))
            k = int(m.group(2))
            if not 1 <= k <= MAX_OFFSET:
                raise ParseError(f"step offset must be between 1 and {MAX_OFFSET}, got {k}")
            return Selector("offset", m.group(1), k)
        if t.lower() in ("any", "min"):
            return Selector(t.lower())
        if re.fullmatch(r"[A-Z]|S\d+", t):
            return Selector("label", label=t)
        raise ParseError(f"bad step selector {t!r}", expected={"?n", "?n+k", "any", "min", "<label>"})

    def term(self) -> Term:
        t = self.next()
        if t in "{}().":
            raise ParseError(f"expected a term, got {t!r}")
        return parse_term(t)

    def block_body(self):
        self.expect("{")
        patterns, filters = [], []
        while self.peek() != "}":
            if self.peek() is None:
                raise ParseError("unterminated pattern block", expected={"}"})
            if self.peek().upper() == "FILTER":
                self.next()
                self.expect("(")
                left = self.term()
                self.expect("!=")
                right = self.term()
                self.expect(")")
                filters.append(Filter(left, right))
            else:
                s, p, o = self.term(), self.term(), self.term()
                if not isinstance(p, IRI):
                    raise ParseError(f"predicate must be an IRI, got {p}")
                patterns.append(Triple(s, p, o))
            if self.peek() == ".":
                self.next()
        self.expect("}")
        return tuple(patterns), tuple(filters)

    def query(self, text) -> TemporalQuery:
        self.expect("SELECT")
        if self.peek() == "*":
            self.next()
            projection = None
        else:
            projection = []
            while self.peek() is not None and self.peek().startswith("?"):
                projection.append(self.next()[1:])
            if not projection:
                raise ParseError("SELECT needs variables or *", expected={"?var", "*"})
            projection = tuple(projection)
        blocks = []
        while self.peek() is not None:
            self.expect("WHERE-AT-STEP")
            sel = self.selector()
            patterns, filters = self.block_body()
            if not patterns:
                raise ParseError("empty pattern block")
            blocks.append(Block(sel, patterns, filters))
        if not blocks:
            raise ParseError("query has no WHERE-AT-STEP block", expected={"WHERE-AT-STEP"})
        q = TemporalQuery(projection, tuple(blocks), text.strip())
        _validate(q)
        return q


def _validate(q: TemporalQuery):
    step_vars = {b.selector.var for b in q.blocks if b.selector.kind in ("var", "offset")}
    if len(step_vars) > 1:
        raise ParseError("at most one step variable per query")
    if any(b.selector.kind == "offset" for b in q.blocks) and not any(
            b.selector.kind == "var" for b in q.blocks):
        raise ParseError("step offset refers to a step variable no block binds")
    if q.projection:
        known = set().union(*(b.variables() for b in q.blocks)) | step_vars
        for v in q.projection:
            if v not in known:
                raise ParseError(f"projected variable ?{v} does not occur in the query")


def parse_query(text: str) -> TemporalQuery:
    body = "\n".join(ln.split("#", 1)[0] for ln in text.splitlines())
    return _QueryParser(body).query(text)


def parse_queries(text: str) -> list[TemporalQuery]:
    """Several queries, each starting with SELECT; ``#`` comments are ignored."""
    body = "\n".join(ln.split("#", 1)[0] for ln in text.splitlines())
    chunks = re.split(r"(?=\bSELECT\b)", body)
    return [parse_query(c) for c in chunks if c.strip()]


# -- evaluation -----------------------------------------------------------------------

def superclass_map(tbox) -> dict:
    """qualified class name -> set of named superclasses (reflexive, transitive)."""
    edges = {}
    for ax in tbox or ():
        if isinstance(ax, SubClass) and isinstance(ax.sub, Named):
            sups = [ax.sup] if isinstance(ax.sup, Named) else (
                [m for m in ax.sup.members if isinstance(m, Named)] if isinstance(ax.sup, And) else [])
            for s in sups:
                edges.setdefault(ax.sub.name, set()).add(s.name)
        elif isinstance(ax, Equivalent) and isinstance(ax.left, Named) and isinstance(ax.right, Named):
            edges.setdefault(ax.left.name, set()).add(ax.right.name)
            edges.setdefault(ax.right.name, set()).add(ax.left.name)
    out = {}
    for c in edges:
        seen, todo = {c}, [c]
        while todo:
            for s in edges.get(todo.pop(), ()):
                if s not in seen:
                    seen.add(s)
                    todo.append(s)
        out[c] = seen
    return out


def _iri_of(name: str) -> IRI:
    p, _, local = name.partition(":")
    return IRI(p, local) if local else IRI("", p)


class _Evaluator:
    def __init__(self, trace: Trace, tbox):
        self.trace = trace
        self.sups = superclass_map(tbox)
        self._types = {}

    def types_upto(self, idx: int) -> frozenset:
        if idx not in self._types:
            out = set()
            for snap in self.trace.snapshots[: idx + 1]:
                for t in snap.triples:
                    if t.p == RDF_TYPE:
                        out.add(t)
                        if isinstance(t.o, IRI):
                            for s in self.sups.get(str(t.o), ()):
                                out.add(Triple(t.s, RDF_TYPE, _iri_of(s)))
            self._types[idx] = frozenset(out)
        return self._types[idx]

    def facts(self, idx: int, vantage: int) -> frozenset:
        snap = self.trace.snapshots[idx]
        others = frozenset(t for t in snap.triples if t.p != RDF_TYPE)
        return others | self.types_upto(max(idx, vantage))

    def steps(self, sel: Selector, n):
        count = len(self.trace)
        if sel.kind == "var":
            return [n]
        if sel.kind == "offset":
            return [n + sel.offset] if n + sel.offset < count else []
        if sel.kind == "label":
            return [self.trace.index(sel.label)] if sel.label in self.trace.labels else []
        return list(range(count))

    def evaluate(self, q: TemporalQuery):
        step_var = q.step_var
        last = len(self.trace) - 1
        projected_step = bool(q.projection) and step_var in q.projection
        results = []          # (bindings, step var index or None, min-block step or None)
        for n in (range(len(self.trace)) if step_var else [None]):
            vantage = n if projected_step else last
            partial = [({}, None)]
            for b in q.blocks:
                nxt = []
                for binding, mstep in partial:
                    for idx in self.steps(b.selector, n):
                        for sol in match_pattern(self.facts(idx, vantage), b.patterns, b.filters,
                                                 initial=binding):
                            nxt.append((sol, idx if b.selector.kind == "min" else mstep))
                partial = nxt
            results.extend((binding, n, mstep) for binding, mstep in partial)
        if any(b.selector.kind == "min" for b in q.blocks) and results:
            if step_var is not None:
                best = min(r[1] for r in results)
                results = [r for r in results if r[1] == best]
            else:
                best = min(r[2] for r in results)
                results = [r for r in results if r[2] == best]
        return results


def evaluate(query: TemporalQuery, trace: Trace, tbox=()) -> AnswerSet:
    if len(trace) == 0:
        raise ValueError("cannot query an empty trace")
    results = _Evaluator(trace, tbox).evaluate(query)
    step_var = query.step_var
    if query.projection is None:
        return AnswerSet((), ((),) if results else (), existence=True)
    rows = set()
    for binding, n, _ in results:
        row = []
        for v in query.projection:
            row.append(trace.labels[n] if v == step_var else binding[Var(v)])
        rows.add(tuple(row))
    ordered = sorted(rows, key=lambda r: tuple(_value_key(x) for x in r))
    return AnswerSet(query.projection, tuple(ordered))


def _value_key(x):
    return (0, x) if isinstance(x, str) else (1, term_key(x))


def render_answer(query: TemporalQuery, answers: AnswerSet, phrasing: str | None = None) -> str:
    """``yes``/``no`` for existence queries, otherwise sorted ``?var = value`` lines.

    ``phrasing`` is an optional skeleton such as ``"{x} delivered it."``.
    """
    if answers.existence:
        return "yes" if answers else "no"
    if phrasing is not None:
        return "\n".join(phrasing.format(**{v: str(val) for v, val in zip(answers.variables, row)})
                         for row in answers.rows)
    if not answers.rows:
        return "(no answer)"
    return "\n".join(", ".join(f"?{v} = {val}" for v, val in zip(answers.variables, row))
                     for row in answers.rows)


def answers_json(queries, answer_sets) -> str:
    doc = []
    for q, a in zip(queries, answer_sets):
        doc.append({"query": q.text, "existence": a.existence, "answer": bool(a) if a.existence else
                    [{k: str(v) for k, v in d.items()} for d in a.as_dicts()]})
    return json.dumps(doc, indent=2)
