"""Executing compiled update operations into a trace of snapshots.

Each label's snapshot is the previous snapshot, plus that label's explicit
op, plus any triples planned at that label, plus the entailment closure.
An unmet ground precondition is asserted retroactively at the earliest
step where its constants are known and typed, and the run is replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cnl.factual import INVOCATION
from .dl import And, Domain, Exists, Named, Range, SubClass, SubProperty, Top
from .errors import InconsistentState, PreconditionUnsatisfiable, WhereUnmatched
from .rdf import IRI, RDF_TYPE, Anon, Snapshot, Trace, Triple, UpdateOp, apply_update, match_pattern
from .reasoner import DEFAULT_NODE_BUDGET, KnowledgeBase, is_consistent
from .dl import ABox
from .templates import compile_assertion, compile_invocation, property_iri

PLANNED_REASON = "Inserted by planning because of procedural template precondition at step {label}."


@dataclass(frozen=True)
class ImplicitStatement:
    triple: Triple
    provenance: str          # entailed | planned
    reason: str


@dataclass(frozen=True)
class StepRecord:
    label: str
    explicit: UpdateOp
    implicit: tuple = ()


@dataclass(frozen=True)
class ExecutionResult:
    trace: Trace
    steps: tuple
    planned: tuple = ()      # (placement label, triple, consuming label)

    def report(self) -> str:
        return op_report(self.steps)


# -- compilation of resolved atoms ---------------------------------------------------

def compile_program(atoms, templates) -> list[tuple[str, UpdateOp]]:
    by_name = {t.name: t for t in templates}
    out = []
    for a in atoms:
        if a.kind == INVOCATION:
            t = by_name[a.template]
            op = compile_invocation(t, dict(a.args), source=a.label)
        else:
            op = compile_assertion(a, source=a.label)
        out.append((a.label, op))
    return out


# -- entailment ------------------------------------------------------------------------

def _class_iri(expr):
    if isinstance(expr, Named):
        p, _, local = expr.name.partition(":")
        return [IRI(p, local) if local else IRI("", p)]
    if isinstance(expr, And):
        return [i for m in expr.members for i in _class_iri(m)]
    return []


@dataclass
class EntailmentRules:
    domain: dict = field(default_factory=dict)   # role -> [class IRI]
    range: dict = field(default_factory=dict)
    supers: dict = field(default_factory=dict)   # role -> [strict super roles]

    @classmethod
    def from_tbox(cls, tbox) -> "EntailmentRules":
        r = cls()
        direct = {}
        for ax in tbox:
            if isinstance(ax, Domain):
                r.domain.setdefault(ax.role, []).extend(_class_iri(ax.cls))
            elif isinstance(ax, Range):
                r.range.setdefault(ax.role, []).extend(_class_iri(ax.cls))
            elif isinstance(ax, SubClass) and isinstance(ax.sub, Exists) and ax.sub.filler is Top:
                table = r.range if ax.sub.inverse else r.domain
                table.setdefault(ax.sub.role, []).extend(_class_iri(ax.sup))
            elif isinstance(ax, SubProperty):
                direct.setdefault(ax.sub, set()).add(ax.sup)
        for role in direct:
            seen, todo = set(), list(direct[role])
            while todo:
                s = todo.pop()
                if s not in seen and s != role:
                    seen.add(s)
                    todo.extend(direct.get(s, ()))
            r.supers[role] = sorted(seen)
        return r


def _role_name(p: IRI) -> str:
    return p.local if not p.prefix else f"{p.prefix}:{p.local}"


def entail_step(snapshot: Snapshot, rules: EntailmentRules) -> list[ImplicitStatement]:
    """Fixed-point closure under domain, range and subproperty rules."""
    known = set(snapshot.triples)
    out = []
    todo = list(snapshot.triples)
    while todo:
        t = todo.pop(0)
        if t.p == RDF_TYPE or not isinstance(t.p, IRI):
            continue
        role = _role_name(t.p)
        derived = []
        for sup in rules.supers.get(role, ()):
            derived.append((Triple(t.s, property_iri(sup), t.o),
                            f"Entailed by subproperty {role} of {sup}"))
        for c in rules.domain.get(role, ()):
            derived.append((Triple(t.s, RDF_TYPE, c), f"Entailed by domain of the property {role}"))
        for c in rules.range.get(role, ()):
            derived.append((Triple(t.o, RDF_TYPE, c), f"Entailed by range of the property {role}"))
        for nt, why in derived:
            if nt not in known:
                known.add(nt)
                todo.append(nt)
                out.append(ImplicitStatement(nt, "entailed", why))
    return out


# -- consistency -------------------------------------------------------------------------

def snapshot_abox(snapshot: Snapshot) -> ABox:
    abox = ABox()
    for t in snapshot.triples:
        if t.p == RDF_TYPE and isinstance(t.o, IRI):
            abox.add_type(str(t.s), Named(str(t.o)))
        else:
            abox.add_role(str(t.s), _role_name(t.p), str(t.o))
    return abox


def check_consistency_at_step(snapshot: Snapshot, tbox, budget=DEFAULT_NODE_BUDGET) -> bool:
    return is_consistent(KnowledgeBase(tuple(tbox), snapshot_abox(snapshot)), budget)


# -- planning ----------------------------------------------------------------------------

def _constants(t: Triple):
    return [x for x in (t.s, t.o) if isinstance(x, Anon)]


def plan_precondition(snapshots, ops, unmet: Triple, consuming: int) -> int:
    """Index of the step at which ``unmet`` is asserted retroactively."""
    if consuming == 0:
        raise PreconditionUnsatisfiable(f"precondition {unmet} of the first step cannot be planned")
    placement = 0
    for c in _constants(unmet):
        intro = next((j for j, (_, op) in enumerate(ops) if c in op.constants()), consuming)
        if intro >= consuming:
            continue                               # first introduced by the consuming step
        typed = next((j for j, s in enumerate(snapshots[:consuming])
                      if any(t.s == c and t.p == RDF_TYPE for t in s.triples)), None)
        at = consuming - 1 if typed is None else max(intro, typed)
        placement = max(placement, at)
    return placement


# -- execution ------------------------------------------------------------------------------

def _execute(ops, tbox, rules, planned, check, budget):
    """One pass.  Returns (snapshots, records) or ('plan', step index, triple)."""
    cur = Snapshot("", frozenset(), frozenset())
    snapshots, records = [], []
    for i, (label, op) in enumerate(ops):
        for chk in op.checks:
            if chk not in cur.triples:
                return "plan", i, chk
        for pat in op.absent:
            if match_pattern(cur, [pat], op.filters):
                raise PreconditionUnsatisfiable(f"step {label}: {pat} must not hold")
        if op.where and not match_pattern(cur, op.where, op.filters):
            raise WhereUnmatched(f"step {label}: no binding for WHERE {{{'. '.join(map(str, op.where))}}}")
        nxt = apply_update(cur, op, label=label)
        implicit = []
        for t, consumer in planned.get(i, ()):
            if t not in nxt.triples:
                nxt = apply_update(nxt, UpdateOp(inserts=(t,), provenance="planned"))
                implicit.append(ImplicitStatement(t, "planned", PLANNED_REASON.format(label=consumer)))
        ent = entail_step(nxt, rules)
        if ent:
            nxt = apply_update(nxt, UpdateOp(inserts=tuple(s.triple for s in ent), provenance="entailed"))
            implicit.extend(ent)
        if check and not check_consistency_at_step(nxt, tbox, budget):
            if any(s.provenance == "planned" for s in implicit):
                raise PreconditionUnsatisfiable(f"planned insert at step {label} makes the state inconsistent")
            raise InconsistentState(f"snapshot {label} is inconsistent with the ontology")
        snapshots.append(nxt)
        records.append(StepRecord(label, op, tuple(implicit)))
        cur = nxt
    return snapshots, records


def run(ops, tbox=(), check_consistency: bool = True, budget: int = DEFAULT_NODE_BUDGET) -> ExecutionResult:
    """Execute labelled ops ``[(label, UpdateOp), ...]`` into a trace."""
    ops = list(ops)
    rules = EntailmentRules.from_tbox(tbox)
    planned = {}
    plan_log = []
    done = set()
    while True:
        res = _execute(ops, tbox, rules, planned, check_consistency, budget)
        if res[0] != "plan":
            snapshots, records = res
            return ExecutionResult(Trace(tuple(snapshots)), tuple(records), tuple(plan_log))
        _, i, triple = res
        consumer = ops[i][0]
        if (triple, consumer) in done:
            raise PreconditionUnsatisfiable(f"precondition {triple} of step {consumer} cannot be established")
        done.add((triple, consumer))
        # replay the prefix to find where the constants become known
        prefix = _execute(ops[:i], tbox, rules, planned, False, budget)
        snapshots = prefix[0] if prefix[0] != "plan" else []
        at = plan_precondition(snapshots, ops, triple, i)
        planned.setdefault(at, []).append((triple, consumer))
        plan_log.append((ops[at][0], triple, consumer))


def execute_atoms(atoms, templates, tbox, check_consistency=True, budget=DEFAULT_NODE_BUDGET):
    return run(compile_program(atoms, templates), tbox, check_consistency, budget)


# -- reporting ------------------------------------------------------------------------------

def op_report(steps, width: int = 72) -> str:
    """Two columns per label: the explicit statement and the implicit ones."""
    lines = [f"{'':3}{'Explicit statement':{width}} | Implicit statements"]
    lines.append("-" * (width + 30))
    for rec in steps:
        explicit = str(rec.explicit) or "(no triples)"
        right = [f"INSERT {{{s.triple}}}  {s.reason}" for s in rec.implicit]
        lines.append(f"{rec.label:3}{explicit:{width}} | {right[0] if right else ''}")
        for extra in right[1:]:
            lines.append(f"{'':3}{'':{width}} | {extra}")
    return "\n".join(lines) + "\n"
