"""Procedural templates: parsing and compilation into update operations.

File format, one block per procedure::

    Procedure: Removing
    :parameters (?agent ?source ?theme)
    :precondition (stores ?source ?theme)
    :effect (and(stores ?agent ?theme) (not(stores ?source ?theme)))
    :lexicalUnits (confiscate, remove, snatch, take, withdraw)
    :roles (subject ?agent) (object ?theme) (from ?source)

``;`` starts a comment.  Variable names treat ``-`` and ``_`` alike.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from .dl import Domain, Exists, Range, SubClass, Top
from .errors import DuplicateTemplateName, MissingRole, ParseError, UnboundEffectVariable
from .rdf import IRI, RDF_TYPE, Anon, Filter, Triple, UpdateOp, Var, parse_term

log = logging.getLogger(__name__)

_SECTION_RE = re.compile(r"^\s*:(parameters|precondition|effect|lexicalUnits|roles)\b", re.M)
_SEXPR_TOKEN_RE = re.compile(r"\(|\)|,|[^\s(),]+")


@dataclass(frozen=True)
class Literal:
    """``(pred a b)``, optionally negated.  ``pred == "="`` is an equality."""

    pred: str
    args: tuple
    positive: bool = True

    def variables(self) -> set:
        return {a for a in self.args if isinstance(a, Var)}

    def __str__(self):
        body = f"({self.pred} {' '.join(map(str, self.args))})"
        return body if self.positive else f"(not{body})"


@dataclass(frozen=True)
class ProceduralTemplate:
    name: str
    parameters: tuple
    precondition: tuple = ()
    effect: tuple = ()
    lexical_units: tuple = ()
    roles: tuple = ()          # (slot, parameter) pairs in file order
    notes: tuple = field(default=(), compare=False)

    @property
    def role_map(self) -> dict:
        return dict(self.roles)

    @property
    def slots(self) -> set:
        return {s for s, _ in self.roles}

    def existentials(self) -> set:
        params = set(self.parameters)
        out = set()
        for lit in (*self.precondition, *self.effect):
            out |= {v.name for v in lit.variables()} - params
        return out

    def properties(self) -> set:
        return {lit.pred for lit in (*self.precondition, *self.effect) if lit.pred not in ("=", "rdf:type")}


# -- s-expressions -------------------------------------------------------------

def _sexprs(text: str):
    """Parse a sequence of s-expressions into nested lists of strings."""
    toks = [t for t in _SEXPR_TOKEN_RE.findall(text) if t != ","]
    stack, out = [[]], None
    for t in toks:
        if t == "(":
            stack.append([])
        elif t == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(t)
    if len(stack) != 1:
        raise ParseError("unbalanced '('")
    out = stack[0]
    return out


def canonical_var(name: str) -> str:
    return name.lstrip("?").replace("-", "_")


def _term(tok: str):
    if tok.startswith("?"):
        return Var(canonical_var(tok))
    return parse_term(tok)


def _literals(expr, where: str) -> list[Literal]:
    if not isinstance(expr, list):
        raise ParseError(f"expected a parenthesised literal in {where}, got {expr!r}")
    if not expr:
        return []
    head = expr[0]
    if isinstance(head, list):
        # a bare sequence of literals: ((a ?x ?y) (b ?y ?z))
        return [lit for e in expr for lit in _literals(e, where)]
    if head == "and":
        return [lit for e in expr[1:] for lit in _literals(e, where)]
    if head == "not":
        if len(expr) != 2:
            raise ParseError(f"'not' takes one argument in {where}")
        inner = _literals(expr[1], where)
        if len(inner) != 1:
            raise ParseError(f"'not' must wrap a single literal in {where}")
        lit = inner[0]
        return [Literal(lit.pred, lit.args, not lit.positive)]
    if any(isinstance(a, list) for a in expr[1:]):
        raise ParseError(f"nested expression inside literal {head!r} in {where}")
    return [Literal(head, tuple(_term(a) for a in expr[1:]))]


def _sections(block: str) -> dict:
    out = {}
    marks = list(_SECTION_RE.finditer(block))
    for m, nxt in zip(marks, marks[1:] + [None]):
        out[m.group(1)] = block[m.end(): nxt.start() if nxt else len(block)].strip()
    return out


def _parse_block(name: str, block: str) -> ProceduralTemplate:
    sec = _sections(block)
    for required in ("parameters", "effect", "lexicalUnits"):
        if required not in sec:
            raise ParseError(f"procedure {name!r} lacks :{required}")
    notes = []
    raw_params = _sexprs(sec["parameters"])
    if len(raw_params) != 1 or not isinstance(raw_params[0], list):
        raise ParseError(f"procedure {name!r}: :parameters must be one list")
    params = tuple(canonical_var(p) for p in raw_params[0])
    if len(set(params)) != len(params):
        raise ParseError(f"procedure {name!r}: repeated parameter")

    raw_vars = set(re.findall(r"\?[\w-]+", block))
    by_canon = {}
    for v in raw_vars:
        by_canon.setdefault(canonical_var(v), set()).add(v)
    for canon, spellings in sorted(by_canon.items()):
        if len(spellings) > 1:
            notes.append(f"variable spellings {sorted(spellings)} normalised to ?{canon}")

    pre = []
    for e in _sexprs(sec.get("precondition", "()")):
        pre.extend(_literals(e, "precondition"))
    eff = []
    for e in _sexprs(sec["effect"]):
        eff.extend(_literals(e, "effect"))
    for lit in eff:
        if lit.pred == "=":
            raise ParseError(f"procedure {name!r}: equality in effect")
    for lit in pre:
        if lit.pred == "=" and lit.positive:
            raise ParseError(f"procedure {name!r}: positive equality in precondition is not supported")

    lus_raw = _sexprs(sec["lexicalUnits"])
    if len(lus_raw) != 1 or not isinstance(lus_raw[0], list):
        raise ParseError(f"procedure {name!r}: :lexicalUnits must be one list")
    lus = tuple(str(x).lower() for x in lus_raw[0])

    roles = []
    if "roles" in sec:
        for pair in _sexprs(sec["roles"]):
            if not (isinstance(pair, list) and len(pair) == 2 and pair[1].startswith("?")):
                raise ParseError(f"procedure {name!r}: malformed role {pair!r}")
            param = canonical_var(pair[1])
            if param not in params:
                raise ParseError(f"procedure {name!r}: role {pair[0]!r} maps to unknown parameter ?{param}")
            roles.append((pair[0].lower(), param))
    else:
        notes.append("no :roles section; only the subject slot can be bound")
        if params:
            roles.append(("subject", params[0]))
    unreachable = set(params) - {p for _, p in roles}
    if unreachable:
        notes.append("parameters not reachable from any role: " + ", ".join(sorted(unreachable)))

    t = ProceduralTemplate(name, params, tuple(pre), tuple(eff), lus, tuple(roles), tuple(notes))
    for n in notes:
        log.info("template %s: %s", name, n)
    return t


def parse_templates(text: str) -> list[ProceduralTemplate]:
    lines = [ln.split(";", 1)[0] for ln in text.splitlines()]
    body = "\n".join(lines)
    parts = re.split(r"^\s*Procedure:\s*(\S+)\s*$", body, flags=re.M)
    if parts[0].strip():
        raise ParseError("text before the first 'Procedure:' header")
    out, seen = [], set()
    for name, block in zip(parts[1::2], parts[2::2]):
        if name in seen:
            raise DuplicateTemplateName(f"duplicate procedure name {name!r}")
        seen.add(name)
        out.append(_parse_block(name, block))
    return out


def load_templates(path) -> list[ProceduralTemplate]:
    from pathlib import Path
    return parse_templates(Path(path).read_text(encoding="utf-8"))


def check_universal(templates, tbox, whitelist=()) -> list[str]:
    """Warnings for template properties that carry domain or range restrictions."""
    restricted = set()
    for ax in tbox:
        if isinstance(ax, (Domain, Range)):
            restricted.add(ax.role)
        elif isinstance(ax, SubClass) and isinstance(ax.sub, Exists) and ax.sub.filler is Top:
            restricted.add(ax.sub.role)
    warnings = []
    for t in templates:
        for p in sorted(t.properties()):
            if p in restricted and p not in whitelist:
                warnings.append(f"template {t.name} uses non-universal property {p}")
    for w in warnings:
        log.warning(w)
    return warnings


# -- compilation ---------------------------------------------------------------

def property_iri(name: str) -> IRI:
    if name == "rdf:type":
        return RDF_TYPE
    if ":" in name:
        p, local = name.split(":", 1)
        return IRI(p, local)
    return IRI("", name)


def _triple(lit: Literal, sub) -> Triple:
    if len(lit.args) != 2:
        raise ParseError(f"literal {lit} must have two arguments")
    s, o = (sub.get(a.name, a) if isinstance(a, Var) else a for a in lit.args)
    return Triple(s, property_iri(lit.pred), o)


def bind_roles(template: ProceduralTemplate, bindings) -> dict:
    """slot -> id bindings to parameter -> id; raises MissingRole on slots the template lacks."""
    roles = template.role_map
    out = {}
    for slot, value in dict(bindings).items():
        slot = slot.lower()
        if slot not in roles:
            raise MissingRole(f"template {template.name} has no role for slot {slot!r}")
        param = roles[slot]
        if param in out and out[param] != value:
            raise MissingRole(f"template {template.name}: parameter ?{param} bound twice")
        out[param] = value
    return out


def compile_invocation(template: ProceduralTemplate, bindings, source: str = "") -> UpdateOp:
    if not bindings:
        raise MissingRole(f"template {template.name} invoked without role bindings")
    sub = bind_roles(template, bindings)
    params = set(template.parameters)
    exist = template.existentials()

    where, checks, absent, filters = [], [], [], []
    for lit in template.precondition:
        if lit.pred == "=":
            a, b = (sub.get(x.name, x) if isinstance(x, Var) else x for x in lit.args)
            filters.append(Filter(a, b))
            continue
        t = _triple(lit, sub)
        unbound_params = {v.name for v in lit.variables()} & params - set(sub)
        if unbound_params:
            raise MissingRole(f"template {template.name}: precondition needs "
                              + ", ".join("?" + p for p in sorted(unbound_params)))
        if not lit.positive:
            absent.append(t)
        elif t.is_ground():
            checks.append(t)
        else:
            where.append(t)

    bound_by_where = {x.name for t in where for x in t if isinstance(x, Var)}
    deletes, inserts = [], []
    for lit in template.effect:
        t = _triple(lit, sub)
        for v in lit.variables():
            if v.name in params and v.name not in sub:
                raise UnboundEffectVariable(f"template {template.name}: effect uses unbound parameter ?{v.name}")
            if v.name in exist and v.name not in bound_by_where:
                raise UnboundEffectVariable(f"template {template.name}: effect variable ?{v.name} has no binding source")
        (inserts if lit.positive else deletes).append(t)
    return UpdateOp(tuple(deletes), tuple(inserts), tuple(where), tuple(filters),
                    tuple(checks), tuple(absent), "explicit", source)


def compile_assertion(atom, source: str = "") -> UpdateOp:
    """INSERT of the single triple asserted by a type or property atom.

    Negated-existential atoms yield an empty op: they constrain the
    disambiguation but put no triple into the store.
    """
    kind = atom.kind
    if kind == "type-assertion":
        cls = atom.sense[0]
        t = Triple(atom.subject, RDF_TYPE, property_iri(cls))
        return UpdateOp(inserts=(t,), source=source)
    if kind == "property-assertion":
        t = Triple(atom.subject, property_iri(atom.prop), atom.object)
        return UpdateOp(inserts=(t,), source=source)
    if kind == "negated-existential":
        return UpdateOp(source=source)
    raise ValueError(f"not an assertion atom: {kind}")


def is_anon(x) -> bool:
    return isinstance(x, Anon)
