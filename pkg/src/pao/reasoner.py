"""Tableau reasoner for ALCI with a role hierarchy and domain/range axioms.

The TBox is preprocessed by absorption: axioms whose left side is a named
class become lazy unfolding rules, existential left sides are rewritten into
universal restrictions, domain/range axioms fire on edges, and anything left
over is internalised as a concept added to every node.  Termination uses
dynamic equality blocking between tree nodes.  Disjunctions are handled
with unit propagation, semantic branching and dependency-directed
backjumping, so a clash only revisits the choices that caused it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .dl import (ABox, And, Bottom, ClassExpr, Disjoint, Domain, Equivalent, Exists, Forall,
                 Named, Not, Or, Range, SubClass, SubProperty, Top, _Bottom, _Top,
                 axiom_class_names, axiom_role_names, class_names, conj, disj, normalize,
                 role_names)
from .errors import BudgetExceeded, UnsupportedAxiom

DEFAULT_NODE_BUDGET = 100_000


@dataclass
class KnowledgeBase:
    tbox: list = field(default_factory=list)
    abox: ABox = field(default_factory=ABox)

    def __post_init__(self):
        self.tbox = list(self.tbox)
        for ax in self.tbox:
            if not isinstance(ax, (SubClass, Equivalent, Disjoint, SubProperty, Domain, Range)):
                raise UnsupportedAxiom(f"axiom outside the supported fragment: {ax!r}")

    def role_hierarchy(self) -> dict:
        """Reflexive-transitive closure: role -> set of super-roles."""
        roles = set()
        for ax in self.tbox:
            roles |= axiom_role_names(ax)
        for _, r, _ in self.abox.roles:
            roles.add(r)
        for _, expr in self.abox.types:
            roles |= role_names(expr)
        sup = {r: {r} for r in roles}
        for ax in self.tbox:
            if isinstance(ax, SubProperty):
                sup[ax.sub].add(ax.sup)
        changed = True
        while changed:
            changed = False
            for r in sup:
                extra = set().union(*(sup[s] for s in sup[r])) - sup[r]
                if extra:
                    sup[r] |= extra
                    changed = True
        return sup


class _Compiled:
    """Absorbed TBox."""

    def __init__(self, kb: KnowledgeBase):
        self.unfold: dict[str, list] = {}
        self.global_: list = []
        self.domain: dict[str, list] = {}
        self.range: dict[str, list] = {}
        self.supers = kb.role_hierarchy()
        for ax in kb.tbox:
            self._axiom(ax)
        self.global_ = [g for g in dict.fromkeys(self.global_) if g != Top]

    def _axiom(self, ax):
        if isinstance(ax, SubClass):
            self._absorb(ax.sub, ax.sup)
        elif isinstance(ax, Equivalent):
            self._absorb(ax.left, ax.right)
            self._absorb(ax.right, ax.left)
        elif isinstance(ax, Disjoint):
            self._absorb(conj([ax.left, ax.right]), Bottom)
        elif isinstance(ax, Domain):
            self.domain.setdefault(ax.role, []).append(simplify(normalize(ax.cls)))
        elif isinstance(ax, Range):
            self.range.setdefault(ax.role, []).append(simplify(normalize(ax.cls)))
        elif isinstance(ax, SubProperty):
            pass
        else:
            raise UnsupportedAxiom(repr(ax))

    def _absorb(self, lhs: ClassExpr, rhs: ClassExpr):
        if isinstance(lhs, Named):
            self.unfold.setdefault(lhs.name, []).append(simplify(normalize(rhs)))
        elif isinstance(lhs, _Top):
            self.global_.append(simplify(normalize(rhs)))
        elif isinstance(lhs, _Bottom):
            return
        elif isinstance(lhs, Or):
            for m in lhs.members:
                self._absorb(m, rhs)
        elif isinstance(lhs, And) and any(isinstance(m, Named) for m in lhs.members):
            i = next(i for i, m in enumerate(lhs.members) if isinstance(m, Named))
            rest = [m for j, m in enumerate(lhs.members) if j != i]
            self._absorb(lhs.members[i], disj([Not(conj(rest)), rhs]))
        elif isinstance(lhs, Exists):
            if isinstance(lhs.filler, _Top):
                table = self.range if lhs.inverse else self.domain
                table.setdefault(lhs.role, []).append(simplify(normalize(rhs)))
            else:
                self._absorb(lhs.filler, Forall(lhs.role, not lhs.inverse, rhs))
        else:
            self.global_.append(simplify(normalize(disj([Not(lhs), rhs]))))


def simplify(expr: ClassExpr) -> ClassExpr:
    """Cheap NNF-preserving clean-up: drop Top/Bottom units, duplicates and complementary pairs."""
    if isinstance(expr, (And, Or)):
        unit, zero = (Top, Bottom) if isinstance(expr, And) else (Bottom, Top)
        out = []
        for m in _flat(type(expr), (simplify(m) for m in expr.members)):
            if m == zero:
                return zero
            if m != unit and m not in out:
                out.append(m)
        if any(isinstance(m, Not) and m.arg in out for m in out):
            return zero
        if not out:
            return unit
        return out[0] if len(out) == 1 else type(expr)(tuple(out))
    if isinstance(expr, Exists):
        f = simplify(expr.filler)
        return Bottom if f == Bottom else Exists(expr.role, expr.inverse, f)
    if isinstance(expr, Forall):
        f = simplify(expr.filler)
        return Top if f == Top else Forall(expr.role, expr.inverse, f)
    return expr


def _flat(cls, items):
    for it in items:
        if isinstance(it, cls):
            yield from it.members
        else:
            yield it


_NO_DEPS = frozenset()


class _State:
    """Completion graph.  Every label entry and edge carries the set of
    branch points it depends on, for dependency-directed backjumping."""

    __slots__ = ("labels", "parent", "edges", "adj", "dirty")

    def __init__(self):
        self.labels: list[dict] = []       # node -> {concept: deps}
        self.parent: list = []
        self.edges: list[tuple] = []       # (src, dst, role, deps)
        self.adj: list[list] = []          # node -> [(neighbour, role, outgoing, deps)]
        self.dirty: set = set()            # nodes whose rules must be re-run

    def copy(self):
        s = _State()
        s.labels = [dict(l) for l in self.labels]
        s.parent = list(self.parent)
        s.edges = list(self.edges)
        s.adj = [list(a) for a in self.adj]
        s.dirty = set(self.dirty)
        return s

    def add_edge(self, a, b, role, deps):
        self.edges.append((a, b, role, deps))
        self.adj[a].append((b, role, True, deps))
        self.adj[b].append((a, role, False, deps))
        self.dirty.update((a, b))


class Tableau:
    def __init__(self, kb: KnowledgeBase, budget: int = DEFAULT_NODE_BUDGET, compiled=None):
        self.kb = kb
        self.c = compiled if compiled is not None else _Compiled(kb)
        self.budget = budget
        self.created = 0
        self._branches = itertools.count()
        self._negs = {}

    # -- helpers ---------------------------------------------------------
    def _new_node(self, st: _State, parent, label: dict):
        self.created += 1
        if self.created > self.budget:
            raise BudgetExceeded(f"tableau exceeded {self.budget} nodes")
        lab = dict.fromkeys(self.c.global_, _NO_DEPS)
        lab.update(label)
        st.labels.append(lab)
        st.parent.append(parent)
        st.adj.append([])
        st.dirty.add(len(st.labels) - 1)
        return len(st.labels) - 1

    def _neg(self, concept):
        if concept not in self._negs:
            self._negs[concept] = simplify(normalize(Not(concept)))
        return self._negs[concept]

    def _neighbours(self, st: _State, x, role, inverse):
        """(neighbour, edge deps) pairs along ``role`` or its inverse."""
        sup = self.c.supers
        for (y, r, outgoing, d) in st.adj[x]:
            if outgoing != inverse and (r == role or role in sup.get(r, ())):
                yield y, d

    def _blocked(self, st: _State, x) -> bool:
        """Direct or indirect blocking (roots are never blocked)."""
        chain = []
        n = x
        while st.parent[n] is not None:
            chain.append(n)
            n = st.parent[n]
        for i, node in enumerate(chain):
            lab = st.labels[node].keys()
            for anc in chain[i + 1:]:
                if st.labels[anc].keys() == lab:
                    return True
        return False

    @staticmethod
    def _clash(label: dict):
        """Dependency set of a clash in ``label``, or None."""
        if Bottom in label:
            return label[Bottom]
        for c, d in label.items():
            if isinstance(c, Not) and c.arg in label:
                return d | label[c.arg]
        return None

    @staticmethod
    def _add(label: dict, concept, deps) -> bool:
        if concept in label or concept is Top:
            return False
        label[concept] = deps
        return True

    # -- rules -----------------------------------------------------------
    def _deterministic(self, st: _State):
        """Apply non-branching, non-generating rules to fixpoint; clash deps or None."""
        c, add, sup = self.c, self._add, self.c.supers
        labels, dirty = st.labels, st.dirty
        while dirty:
            x = dirty.pop()
            lab = labels[x]
            changed = True
            while changed:
                changed = False
                for concept, d in list(lab.items()):
                    if isinstance(concept, And):
                        for m in concept.members:
                            changed |= add(lab, m, d)
                    elif isinstance(concept, Named):
                        for u in c.unfold.get(concept.name, ()):
                            changed |= add(lab, u, d)
                    elif isinstance(concept, Forall):
                        for y, de in self._neighbours(st, x, concept.role, concept.inverse):
                            if add(labels[y], concept.filler, d | de):
                                if y == x:
                                    changed = True
                                else:
                                    dirty.add(y)
                for (y, r, outgoing, de) in st.adj[x]:
                    for s in sup.get(r, (r,)):
                        here, there = (c.domain, c.range) if outgoing else (c.range, c.domain)
                        for k in here.get(s, ()):
                            changed |= add(lab, k, de)
                        for k in there.get(s, ()):
                            if add(labels[y], k, de) and y != x:
                                dirty.add(y)
            bad = self._clash(lab)
            if bad is not None:
                return bad
        return None

    def _expand(self, st: _State):
        """True when a complete clash-free graph is found, else the clash's deps."""
        while True:
            bad = self._deterministic(st)
            if bad is not None:
                return bad
            branch = self._find_or(st)
            if branch is None:
                if not self._generate(st):
                    return True
                continue
            x, concept, live, dead_deps = branch
            base = st.labels[x][concept] | dead_deps
            if not live:
                return base
            if len(live) == 1:
                st.labels[x][live[0]] = base
                st.dirty.add(x)
                continue
            b = next(self._branches)
            failed = base
            refuted = []                # (disjunct, deps of its refutation)
            for m in live:
                s2 = st.copy()
                s2.labels[x][m] = base | {b}
                s2.dirty.add(x)
                for prev, why in refuted:
                    self._add(s2.labels[x], self._neg(prev), why)
                res = self._expand(s2)
                if res is True:
                    return True
                if b not in res:
                    return res          # this choice played no part: jump back
                why = (res - {b}) | base
                refuted.append((m, why))
                failed |= why
            return failed

    def _find_or(self, st: _State):
        """An open disjunction (node, concept, live disjuncts, deps of the dead ones), units first."""
        first = None
        for x, lab in enumerate(st.labels):
            pending = [c for c in lab if isinstance(c, Or) and not any(m in lab for m in c.members)]
            if not pending:
                continue
            if st.parent[x] is not None and self._blocked(st, x):
                continue
            for concept in sorted(pending, key=str):
                live, dead = [], _NO_DEPS
                for m in concept.members:
                    n = self._neg(m)
                    if m is Bottom:
                        continue
                    if n in lab:
                        dead |= lab[n]
                    else:
                        live.append(m)
                if len(live) <= 1:
                    return x, concept, live, dead
                if first is None:
                    first = (x, concept, live, dead)
        return first

    def _generate(self, st: _State) -> bool:
        for x in range(len(st.labels)):
            exists = sorted((c for c in st.labels[x] if isinstance(c, Exists)), key=str)
            if not exists:
                continue
            if st.parent[x] is not None and self._blocked(st, x):
                continue
            for e in exists:
                if any(e.filler in st.labels[y] for y, _ in self._neighbours(st, x, e.role, e.inverse)):
                    continue
                d = st.labels[x][e]
                y = self._new_node(st, x, {e.filler: d})
                st.add_edge(*((y, x) if e.inverse else (x, y)), e.role, d)
                return True
        return False

    def run(self) -> bool:
        st = _State()
        index = {}
        abox = self.kb.abox
        for ind in sorted(abox.individuals, key=str):
            index[ind] = self._new_node(st, None, {})
        for ind, expr in abox.types:
            self._add(st.labels[index[ind]], simplify(normalize(expr)), _NO_DEPS)
            st.dirty.add(index[ind])
        for a, r, b in abox.roles:
            st.add_edge(index[a], index[b], r, _NO_DEPS)
        if not index:
            # consistency of a TBox: the domain is non-empty
            self._new_node(st, None, {})
        return self._expand(st) is True


def is_consistent(kb: KnowledgeBase, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    return Tableau(kb, budget).run()


_FRESH = "__probe__"


def is_satisfiable(tbox, expr: ClassExpr, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    abox = ABox()
    abox.add_type(_FRESH, expr)
    return is_consistent(KnowledgeBase(list(tbox), abox), budget)


def unsatisfiable_classes(tbox, names=None, budget: int = DEFAULT_NODE_BUDGET) -> list[str]:
    """Named classes with an empty extension in every model of ``tbox``."""
    return TBoxReasoner(tbox, budget).unsatisfiable_classes(names)


class TBoxReasoner:
    """Compiles a TBox once and answers many probes against it."""

    def __init__(self, tbox, budget: int = DEFAULT_NODE_BUDGET):
        self.tbox = list(tbox)
        self.budget = budget
        self._kb = KnowledgeBase(self.tbox)
        self._compiled = _Compiled(self._kb)

    def satisfiable(self, expr: ClassExpr) -> bool:
        abox = ABox()
        abox.add_type(_FRESH, expr)
        if role_names(expr) - set(self._compiled.supers):
            return is_consistent(KnowledgeBase(self.tbox, abox), self.budget)
        return Tableau(KnowledgeBase(self.tbox, abox), self.budget, self._compiled).run()

    def class_names(self) -> set:
        names = set()
        for ax in self.tbox:
            names |= axiom_class_names(ax)
        return names

    def unsatisfiable_classes(self, names=None) -> list[str]:
        names = self.class_names() if names is None else names
        return [n for n in sorted(names) if not self.satisfiable(Named(n))]


def is_coherent(tbox, names=None, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """Every named class of ``tbox`` has a model with a non-empty extension."""
    r = TBoxReasoner(tbox, budget)
    names = r.class_names() if names is None else names
    return all(r.satisfiable(Named(n)) for n in sorted(names))


# -- brute-force oracle --------------------------------------------------------

class Verdict(Enum):
    SAT = "sat"
    UNSAT_UP_TO_BOUND = "unsat-up-to-bound"
    UNKNOWN = "unknown"


def _ext(expr, n, cls_ext, role_ext, full):
    """Extension of ``expr`` as an int bitmask array over all interpretations."""
    if isinstance(expr, Named):
        return cls_ext[expr.name]
    if isinstance(expr, _Top):
        return np.full_like(full, full)
    if isinstance(expr, _Bottom):
        return np.zeros_like(full)
    if isinstance(expr, Not):
        return full & ~_ext(expr.arg, n, cls_ext, role_ext, full)
    if isinstance(expr, And):
        out = np.full_like(full, full)
        for m in expr.members:
            out &= _ext(m, n, cls_ext, role_ext, full)
        return out
    if isinstance(expr, Or):
        out = np.zeros_like(full)
        for m in expr.members:
            out |= _ext(m, n, cls_ext, role_ext, full)
        return out
    if isinstance(expr, (Exists, Forall)):
        filler = _ext(expr.filler, n, cls_ext, role_ext, full)
        rel = role_ext[expr.role]
        out = np.zeros_like(full)
        for d in range(n):
            hit = np.zeros_like(full, dtype=bool)
            allok = np.ones_like(full, dtype=bool)
            for e in range(n):
                a, b = (e, d) if expr.inverse else (d, e)
                edge = ((rel >> (a * n + b)) & 1).astype(bool)
                inf = ((filler >> e) & 1).astype(bool)
                hit |= edge & inf
                allok &= ~edge | inf
            bit = hit if isinstance(expr, Exists) else allok
            out |= bit.astype(full.dtype) << d
        return out
    raise TypeError(expr)


def _models(kb: KnowledgeBase, n: int, node_limit: int, used: list) -> bool:
    classes = set()
    roles = set()
    for ax in kb.tbox:
        classes |= axiom_class_names(ax)
        roles |= axiom_role_names(ax)
    for _, e in kb.abox.types:
        classes |= class_names(e)
        roles |= role_names(e)
    for _, r, _ in kb.abox.roles:
        roles.add(r)
    classes, roles = sorted(classes), sorted(roles)
    bits = n * len(classes) + n * n * len(roles)
    inds = sorted(kb.abox.individuals, key=str)
    total = (1 << bits) * (n ** len(inds))
    used[0] += total
    if used[0] > node_limit:
        raise BudgetExceeded(f"brute-force enumeration exceeded {node_limit} interpretations")
    chunk = 1 << 18
    for start in range(0, 1 << bits, chunk):
        idx = np.arange(start, min(1 << bits, start + chunk), dtype=np.int64)
        full = np.full_like(idx, (1 << n) - 1)
        cls_ext = {c: (idx >> (i * n)) & ((1 << n) - 1) for i, c in enumerate(classes)}
        base = n * len(classes)
        role_ext = {r: (idx >> (base + i * n * n)) & ((1 << (n * n)) - 1) for i, r in enumerate(roles)}
        ok = np.ones_like(idx, dtype=bool)
        for ax in kb.tbox:
            ok &= _axiom_holds(ax, n, cls_ext, role_ext, full)
        if not ok.any():
            continue
        for assign in itertools.product(range(n), repeat=len(inds)):
            where = dict(zip(inds, assign))
            m = ok.copy()
            for ind, e in kb.abox.types:
                m &= ((_ext(e, n, cls_ext, role_ext, full) >> where[ind]) & 1).astype(bool)
            for a, r, b in kb.abox.roles:
                m &= ((role_ext[r] >> (where[a] * n + where[b])) & 1).astype(bool)
            if m.any():
                return True
    return False


def _axiom_holds(ax, n, cls_ext, role_ext, full):
    def ext(e):
        return _ext(e, n, cls_ext, role_ext, full)

    if isinstance(ax, SubClass):
        return (ext(ax.sub) & ~ext(ax.sup) & full) == 0
    if isinstance(ax, Equivalent):
        return ext(ax.left) == ext(ax.right)
    if isinstance(ax, Disjoint):
        return (ext(ax.left) & ext(ax.right)) == 0
    if isinstance(ax, Domain):
        return (ext(Exists(ax.role, False, Top)) & ~ext(ax.cls) & full) == 0
    if isinstance(ax, Range):
        return (ext(Exists(ax.role, True, Top)) & ~ext(ax.cls) & full) == 0
    if isinstance(ax, SubProperty):
        return (role_ext[ax.sub] & ~role_ext[ax.sup]) == 0
    raise UnsupportedAxiom(repr(ax))


def brute_force_consistent(kb: KnowledgeBase, max_domain: int, node_limit: int = 5_000_000) -> Verdict:
    """Search every interpretation over domains of size 1..max_domain."""
    if max_domain > 4:
        raise ValueError("max_domain must be <= 4")
    used = [0]
    for n in range(1, max_domain + 1):
        if _models(kb, n, node_limit, used):
            return Verdict.SAT
    return Verdict.UNSAT_UP_TO_BOUND
