"""Disambiguation of factual texts: sense hints, anaphora, recorded choices.

A noun sense is *valid* when the merged TBox plus the ABox read off the
atoms (with that sense substituted) is consistent.  A verb sense is valid
when its role map covers the clause's slots and binds every parameter.
An antecedent is a candidate when asserting the pronoun's constraint on
it keeps the ABox consistent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .cnl.factual import INVOCATION, NEGATED, PROPERTY, TYPE, Discourse, PronounRef, Site
from .dl import ABox, Exists, Named, Not
from .errors import BudgetExceeded, NoAntecedent, ParseError, UnresolvedAmbiguity
from .merge import mint_mwu
from .rdf import Anon, parse_term
from .reasoner import DEFAULT_NODE_BUDGET, KnowledgeBase, is_consistent

VALID, INVALID, UNKNOWN = "valid", "invalid", "unknown"


@dataclass(frozen=True)
class AmbiguityItem:
    site: Site
    labels: tuple
    hints: tuple            # (candidate, hint) pairs in candidate order
    resolution: object = None
    how: str = ""           # auto | choice | interactive

    @property
    def id(self):
        return self.site.id

    @property
    def kind(self):
        return self.site.kind

    @property
    def candidates(self):
        return tuple(c for c, _ in self.hints)

    def valid(self):
        return [c for c, h in self.hints if h == VALID]

    @property
    def resolved(self):
        return self.resolution is not None


@dataclass(frozen=True)
class Disambiguation:
    atoms: tuple
    items: tuple
    resolutions: dict

    def unresolved(self):
        return [i for i in self.items if not i.resolved]


# -- ABox translation ------------------------------------------------------------

def substitute(atom, resolutions: dict):
    """Apply chosen antecedents, senses and templates to one atom."""
    def arg(x):
        if isinstance(x, PronounRef) and x.site in resolutions:
            return resolutions[x.site]
        return x

    changes = {"subject": arg(atom.subject), "object": arg(atom.object),
               "args": tuple((s, arg(a)) for s, a in atom.args)}
    for sid in atom.sites:
        if sid not in resolutions:
            continue
        if atom.kind in (TYPE, NEGATED):
            changes["sense"] = resolutions[sid]
        elif atom.kind == INVOCATION:
            changes["template"] = resolutions[sid]
    return replace(atom, **changes)


def atoms_to_abox(atoms) -> ABox:
    """ABox of the ground, sense-resolved atoms; everything else is skipped."""
    abox = ABox()
    for a in atoms:
        if any(isinstance(x, PronounRef) for x in a.arguments()):
            continue
        if a.kind == TYPE and a.sense is not None:
            abox.add_type(str(a.subject), Named(a.sense[0]))
        elif a.kind == PROPERTY:
            abox.add_role(str(a.subject), a.prop, str(a.object))
        elif a.kind == NEGATED and a.sense is not None:
            abox.add_type(str(a.subject), Not(Exists(a.prop, a.inverse, Named(a.sense[0]))))
    return abox


def _consistent(tbox, abox, budget):
    try:
        return VALID if is_consistent(KnowledgeBase(tuple(tbox), abox), budget) else INVALID
    except BudgetExceeded:
        return UNKNOWN


def _site_atoms(atoms, site_id):
    return [a for a in atoms if site_id in a.sites
            or any(isinstance(x, PronounRef) and x.site == site_id for x in a.arguments())]


# -- hinting ----------------------------------------------------------------------

def hint_noun_senses(atoms, site: Site, inventory, resolutions=None, budget=DEFAULT_NODE_BUDGET):
    resolutions = dict(resolutions or {})
    hints = []
    for cand in site.candidates:
        trial = dict(resolutions)
        trial[site.id] = cand
        abox = atoms_to_abox(substitute(a, trial) for a in atoms)
        hints.append((cand, _consistent(inventory.merged_tbox, abox, budget)))
    return tuple(hints)


def template_covers(template, atom) -> bool:
    slots = {s for s, _ in atom.args}
    if not slots <= template.slots:
        return False
    bound = {template.role_map[s] for s in slots}
    return set(template.parameters) <= bound


def hint_verb_senses(atoms, site: Site, templates):
    by_name = {t.name: t for t in templates}
    clause = _site_atoms(atoms, site.id)[0]
    hints = []
    for cand in site.candidates:
        t = by_name.get(cand)
        hints.append((cand, VALID if t is not None and template_covers(t, clause) else INVALID))
    return tuple(hints)


def resolve_anaphor(atoms, site: Site, discourse: Discourse, inventory, resolutions=None,
                    budget=DEFAULT_NODE_BUDGET):
    """Antecedent candidates, most recent first, with consistency hints.

    Raises NoAntecedent when no earlier id is compatible.
    """
    resolutions = dict(resolutions or {})
    base = atoms_to_abox(substitute(a, resolutions) for a in atoms)
    hints = []
    for cand in discourse.available.get(site.id, site.candidates):
        abox = base.copy()
        if site.constraint is not None:
            abox.add_type(str(cand), site.constraint)
        hints.append((cand, _consistent(inventory.merged_tbox, abox, budget)))
    if not any(h != INVALID for _, h in hints):
        raise NoAntecedent(f"no compatible antecedent for {site.word!r} at {site.id}")
    return tuple(hints)


# -- choices ---------------------------------------------------------------------

def parse_choices(text: str) -> dict:
    out = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"choices line {n}: expected 'site = candidate'")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k] = v
    return out


def candidate_label(site: Site, cand, inventory=None, discourse=None) -> str:
    if site.kind == "noun-sense":
        name = mint_mwu(site.word, cand, inventory, "title") if inventory else "|".join(cand)
        return f"{name} {{{', '.join(cand)}}}"
    if site.kind == "antecedent" and discourse is not None:
        return f"{cand} ({discourse.heads.get(cand, '?')})"
    return str(cand)


def match_candidate(site: Site, value, inventory=None):
    """Map a user-supplied value onto one of the site's candidates."""
    if value in site.candidates:
        return value
    text = str(value).strip()
    low = text.lower()
    if site.kind == "antecedent":
        try:
            term = parse_term(text)
        except Exception:
            term = None
        if term in site.candidates:
            return term
    elif site.kind == "verb-sense":
        for c in site.candidates:
            if c.lower() == low:
                return c
    else:
        for g in site.candidates:
            keys = set()
            for q in g:
                pre = q.split(":", 1)[0]
                keys |= {q.lower(), pre.lower()}
                if inventory is not None:
                    keys.add(inventory.title(pre).lower())
            if inventory is not None:
                keys |= {mint_mwu(site.word, g, inventory, s).lower() for s in ("title", "narrative")}
            if low in keys:
                return g
    raise ParseError(f"{text!r} is not a candidate for {site.id}")


def _choice_for(site: Site, choices: dict):
    if site.id in choices:
        return choices[site.id]
    for k, v in choices.items():
        if "@" in k:
            continue
        if k.lower() == site.word.lower():
            return v
    return None


# -- driver ----------------------------------------------------------------------

def disambiguate(discourse: Discourse, inventory, templates=(), choices=None, callback=None,
                 strict=True, budget=DEFAULT_NODE_BUDGET) -> Disambiguation:
    """Resolve every site in text order.

    A site is settled by (1) a recorded choice, (2) a single valid
    candidate, or (3) the interactive callback.  With ``strict`` any site
    left open raises UnresolvedAmbiguity.
    """
    choices = dict(choices or {})
    atoms = list(discourse.atoms)
    resolutions = {}
    items = []
    for site in sorted(discourse.site_list(), key=lambda s: (s.position, s.id)):
        if site.kind == "noun-sense":
            hints = hint_noun_senses(atoms, site, inventory, resolutions, budget)
        elif site.kind == "verb-sense":
            hints = hint_verb_senses(atoms, site, templates)
        else:
            hints = resolve_anaphor(atoms, site, discourse, inventory, resolutions, budget)
        labels = tuple(a.label for a in _site_atoms(atoms, site.id))
        item = AmbiguityItem(site, labels, hints)
        valid = item.valid()
        chosen, how = None, ""
        recorded = _choice_for(site, choices)
        if recorded is not None:
            chosen, how = match_candidate(site, recorded, inventory), "choice"
        elif len(valid) == 1 and not any(h == UNKNOWN for _, h in hints):
            chosen, how = valid[0], "auto"
        elif callback is not None:
            answer = callback(item)
            if answer is not None:
                chosen, how = match_candidate(site, answer, inventory), "interactive"
        if chosen is not None:
            resolutions[site.id] = chosen
        items.append(replace(item, resolution=chosen, how=how))
    resolved = tuple(substitute(a, resolutions) for a in atoms)
    result = Disambiguation(resolved, tuple(items), resolutions)
    if strict and result.unresolved():
        raise UnresolvedAmbiguity([i.id for i in result.unresolved()])
    return result


def ambiguity_report(items, inventory=None, discourse=None) -> str:
    lines = []
    for it in items:
        lines.append(f"{it.id} [{it.kind}] '{it.site.word}' (atoms {', '.join(it.labels) or '-'})")
        for cand, hint in it.hints:
            mark = "*" if cand == it.resolution else " "
            lines.append(f"  {mark} {candidate_label(it.site, cand, inventory, discourse):50} {hint}")
        status = f"resolved ({it.how})" if it.resolved else "UNRESOLVED"
        lines.append(f"  -> {status}")
    return "\n".join(lines) + ("\n" if lines else "")


_SITE_ID_RE = re.compile(r"^[\w-]+@\d+$")


def is_site_id(text: str) -> bool:
    return bool(_SITE_ID_RE.match(text))
