"""Word-sense partitioning while merging micro-ontologies.

Same-named classes from different ontologies start out as distinct senses.
For every pair, a subclass axiom is tentatively inserted in each direction
and kept only if every named class of the accumulated ontology stays
satisfiable; pairs kept in both directions become equivalent and end up in
one sense group.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import combinations

from .dl import Equivalent, MicroOntology, Named, SubClass, tbox_class_names
from .errors import InconsistentInput, MergeInconsistent
from .reasoner import DEFAULT_NODE_BUDGET, TBoxReasoner


@dataclass(frozen=True)
class InsertionRecord:
    sub: str
    sup: str
    kept: bool
    reason: str

    @property
    def verdict(self):
        return "kept" if self.kept else "rejected"

    def to_json(self):
        return {"sub": self.sub, "sup": self.sup, "verdict": self.verdict, "reason": self.reason}


def local_name(qname: str) -> str:
    return qname.split(":", 1)[-1]


def prefix_of(qname: str) -> str:
    return qname.split(":", 1)[0]


@dataclass
class SenseInventory:
    ontologies: tuple
    merged_tbox: tuple
    groups: dict                     # lexeme -> list of sorted tuples of qualified names
    cross_subsumptions: list         # (sub group, sup group)
    log: list = field(default_factory=list)
    inserted: list = field(default_factory=list)
    aliases: dict = field(default_factory=dict)

    # -- lookups ---------------------------------------------------------
    def ontology(self, prefix) -> MicroOntology | None:
        for o in self.ontologies:
            if o.prefix == prefix:
                return o
        return None

    def title(self, prefix) -> str:
        o = self.ontology(prefix)
        return o.title if o else prefix

    def lexemes(self):
        return sorted(self.groups)

    def senses(self, word: str) -> list[tuple]:
        """Sense groups of a lexeme, matched case-insensitively."""
        out = []
        for lex in sorted(self.groups):
            if lex.lower() == word.lower():
                out.extend(self.groups[lex])
        return out

    def group_of(self, qname: str) -> tuple:
        for g in self.groups.get(local_name(qname), []):
            if qname in g:
                return g
        return (qname,)

    def is_polysemous(self, word: str) -> bool:
        return len(self.senses(word)) > 1

    def display_name(self, group, style="title") -> str:
        return mint_mwu(local_name(group[0]), group, self, style)

    def properties(self) -> set:
        from .dl import axiom_role_names
        out = set()
        for ax in self.merged_tbox:
            out |= axiom_role_names(ax)
        return out

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        return {
            "ontologies": [{"prefix": o.prefix, "iri": o.iri, "title": o.title, "source": o.source}
                           for o in self.ontologies],
            "inserted": [[type(a).__name__, _name(a, 0), _name(a, 1)] for a in self.inserted],
            "groups": {lex: [list(g) for g in gs] for lex, gs in sorted(self.groups.items())},
            "names": {lex: [self.display_name(g) for g in gs] for lex, gs in sorted(self.groups.items())},
            "cross_subsumptions": [[list(a), list(b)] for a, b in self.cross_subsumptions],
            "log": [r.to_json() for r in self.log],
            "aliases": dict(self.aliases),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, doc: dict) -> "SenseInventory":
        from .cnl.ontological import load_ontologies
        onts = load_ontologies([o["source"] for o in doc["ontologies"]])
        inserted = []
        for kind, a, b in doc["inserted"]:
            ctor = Equivalent if kind == "Equivalent" else SubClass
            inserted.append(ctor(Named(a), Named(b)))
        tbox = tuple(ax for o in onts for ax in o.axioms) + tuple(inserted)
        groups = {lex: [tuple(g) for g in gs] for lex, gs in doc["groups"].items()}
        cross = [(tuple(a), tuple(b)) for a, b in doc.get("cross_subsumptions", [])]
        log = [InsertionRecord(r["sub"], r["sup"], r["verdict"] == "kept", r["reason"])
               for r in doc.get("log", [])]
        return cls(tuple(onts), tbox, groups, cross, log, inserted, dict(doc.get("aliases", {})))

    @classmethod
    def loads(cls, text: str) -> "SenseInventory":
        return cls.from_json(json.loads(text))

    def report(self) -> str:
        lines = ["Insertion log:"]
        if not self.log:
            lines.append("  (no same-named classes)")
        for r in self.log:
            lines.append(f"  [{r.verdict:8}] {r.sub} SubClassOf {r.sup}  ({r.reason})")
        lines.append("Sense groups:")
        for lex in sorted(self.groups):
            for g in self.groups[lex]:
                lines.append(f"  {self.display_name(g):40} {{{', '.join(g)}}}")
        lines.append("MWU table:")
        mwus = [(lex, g) for lex in sorted(self.groups) for g in self.groups[lex]
                if len(self.groups[lex]) > 1]
        if not mwus:
            lines.append("  (none)")
        for lex, g in mwus:
            lines.append(f"  {lex}: {self.display_name(g)} / {self.display_name(g, 'narrative')}")
        lines.append("Cross-subsumptions (dashed edges):")
        if not self.cross_subsumptions:
            lines.append("  (none)")
        for a, b in self.cross_subsumptions:
            lines.append(f"  {self.display_name(a)} --> {self.display_name(b)}")
        return "\n".join(lines) + "\n"


def _name(ax, i):
    parts = (ax.sub, ax.sup) if isinstance(ax, SubClass) else (ax.left, ax.right)
    return parts[i].name


def mint_mwu(lexeme: str, group, inventory: SenseInventory, style: str = "title") -> str:
    """Display name of a sense group.

    Monosemous lexemes keep the bare name.  Otherwise the title of the
    lexicographically first ontology in the group is joined to the lexeme
    with a dash: ``ColdWarEasternEurope-Germany`` (``title`` style) or
    ``food-basket`` (``narrative`` style).
    """
    key = "|".join(group)
    if key in inventory.aliases:
        return inventory.aliases[key]
    for q in group:
        if q in inventory.aliases:
            return inventory.aliases[q]
    if len(inventory.senses(lexeme)) <= 1:
        return lexeme
    title = inventory.title(sorted(prefix_of(q) for q in group)[0])
    if style == "narrative":
        return f"{title.lower()}-{lexeme.lower()}"
    return f"{title}-{lexeme}"


def sense_candidates(ontologies) -> dict:
    """lexeme -> sorted qualified names declared under their own ontology's prefix."""
    by_lexeme = {}
    for o in ontologies:
        for q in o.own_classes():
            by_lexeme.setdefault(local_name(q), set()).add(q)
    return {lex: sorted(qs) for lex, qs in by_lexeme.items()}


def _check_coherent(tbox, budget):
    r = TBoxReasoner(tbox, budget)
    return r.unsatisfiable_classes()


def partition_senses(ontologies, aliases=None, budget: int = DEFAULT_NODE_BUDGET) -> SenseInventory:
    ontologies = list(ontologies)
    for o in ontologies:
        bad = _check_coherent(o.axioms, budget)
        if bad:
            raise InconsistentInput(f"micro-ontology {o.prefix!r} is unsatisfiable alone: {', '.join(bad)}")

    base = [ax for o in ontologies for ax in o.axioms]
    cands = sense_candidates(ontologies)
    pairs = []
    for lex in sorted(cands):
        for x, y in combinations(cands[lex], 2):
            pairs.append((lex, x, y))
    pairs.sort(key=lambda t: (t[0], prefix_of(t[1]), prefix_of(t[2])))

    kept_axioms = []
    log = []
    kept = {}
    for _, x, y in pairs:
        for sub, sup in ((x, y), (y, x)):
            trial = SubClass(Named(sub), Named(sup))
            bad = _check_coherent(base + kept_axioms + [trial], budget)
            if bad:
                log.append(InsertionRecord(sub, sup, False, "unsatisfiable: " + ", ".join(bad)))
            else:
                kept_axioms.append(trial)
                log.append(InsertionRecord(sub, sup, True, "satisfiable"))
            kept[(sub, sup)] = not bad

    inserted = []
    equivalences = []
    for _, x, y in pairs:
        if kept[(x, y)] and kept[(y, x)]:
            inserted.append(Equivalent(Named(x), Named(y)))
            equivalences.append((x, y))
        elif kept[(x, y)]:
            inserted.append(SubClass(Named(x), Named(y)))
        elif kept[(y, x)]:
            inserted.append(SubClass(Named(y), Named(x)))
    merged = tuple(base + inserted)
    bad = _check_coherent(merged, budget)
    if bad:
        raise MergeInconsistent("merged ontology is unsatisfiable: " + ", ".join(bad), log)

    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for lex in cands:
        for q in cands[lex]:
            find(q)
    for x, y in equivalences:
        parent[find(x)] = find(y)
    groups = {}
    for lex in sorted(cands):
        comps = {}
        for q in cands[lex]:
            comps.setdefault(find(q), []).append(q)
        groups[lex] = sorted(tuple(sorted(c)) for c in comps.values())

    cross = []
    seen = set()
    for ax in inserted:
        if isinstance(ax, SubClass):
            a = _group_in(groups, ax.sub.name)
            b = _group_in(groups, ax.sup.name)
            if a != b and (a, b) not in seen:
                seen.add((a, b))
                cross.append((a, b))

    inv = SenseInventory(tuple(ontologies), merged, groups, cross, log, inserted, dict(aliases or {}))
    _check_injective(inv)
    return inv


def _group_in(groups, qname):
    for g in groups.get(local_name(qname), []):
        if qname in g:
            return g
    return (qname,)


def _check_injective(inv: SenseInventory):
    for lex, gs in inv.groups.items():
        for style in ("title", "narrative"):
            names = [mint_mwu(lex, g, inv, style) for g in gs]
            if len(set(names)) != len(names):
                raise ValueError(f"sense names for {lex!r} collide: {names}")


def merge_as_single(inventory: SenseInventory) -> MicroOntology:
    """The merged TBox viewed as one ontology (for idempotence checks)."""
    return MicroOntology("merged", "urn:merged", "Merged", inventory.merged_tbox)
