"""Class expressions, axioms, micro-ontologies and ABoxes.

Class names are qualified strings (``"we:Germany"``); roles are bare,
globally shared names (``"involves"``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import UnknownPrefix


class ClassExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Named(ClassExpr):
    name: str

    @property
    def prefix(self):
        return self.name.split(":", 1)[0] if ":" in self.name else ""

    @property
    def local(self):
        return self.name.split(":", 1)[-1]

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class _Top(ClassExpr):
    def __str__(self):
        return "Top"


@dataclass(frozen=True)
class _Bottom(ClassExpr):
    def __str__(self):
        return "Bottom"


Top = _Top()
Bottom = _Bottom()


@dataclass(frozen=True)
class Not(ClassExpr):
    arg: ClassExpr

    def __str__(self):
        return f"not({self.arg})"


def _check_members(cls, members):
    if len(members) < 2:
        raise ValueError(f"{cls} needs at least two members")


@dataclass(frozen=True)
class And(ClassExpr):
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        _check_members("And", self.members)

    def __str__(self):
        return "(" + " and ".join(map(str, self.members)) + ")"


@dataclass(frozen=True)
class Or(ClassExpr):
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        _check_members("Or", self.members)

    def __str__(self):
        return "(" + " or ".join(map(str, self.members)) + ")"


@dataclass(frozen=True)
class Exists(ClassExpr):
    role: str
    inverse: bool
    filler: ClassExpr

    def __str__(self):
        r = self.role + ("^-" if self.inverse else "")
        return f"some {r}.{self.filler}"


@dataclass(frozen=True)
class Forall(ClassExpr):
    """Universal restriction; only produced by :func:`normalize`."""

    role: str
    inverse: bool
    filler: ClassExpr

    def __str__(self):
        r = self.role + ("^-" if self.inverse else "")
        return f"all {r}.{self.filler}"


def conj(members) -> ClassExpr:
    members = list(members)
    if not members:
        return Top
    return members[0] if len(members) == 1 else And(tuple(members))


def disj(members) -> ClassExpr:
    members = list(members)
    if not members:
        return Bottom
    return members[0] if len(members) == 1 else Or(tuple(members))


def _flatten(cls, items):
    out = []
    for it in items:
        if isinstance(it, cls):
            out.extend(it.members)
        else:
            out.append(it)
    return out


def normalize(expr: ClassExpr) -> ClassExpr:
    """Negation normal form: ``Not`` only wraps ``Named``."""
    if isinstance(expr, (Named, _Top, _Bottom)):
        return expr
    if isinstance(expr, And):
        return And(tuple(_flatten(And, [normalize(m) for m in expr.members])))
    if isinstance(expr, Or):
        return Or(tuple(_flatten(Or, [normalize(m) for m in expr.members])))
    if isinstance(expr, Exists):
        return Exists(expr.role, expr.inverse, normalize(expr.filler))
    if isinstance(expr, Forall):
        return Forall(expr.role, expr.inverse, normalize(expr.filler))
    if isinstance(expr, Not):
        a = expr.arg
        if isinstance(a, Named):
            return expr
        if a is Top or isinstance(a, _Top):
            return Bottom
        if isinstance(a, _Bottom):
            return Top
        if isinstance(a, Not):
            return normalize(a.arg)
        if isinstance(a, And):
            return normalize(Or(tuple(Not(m) for m in a.members)))
        if isinstance(a, Or):
            return normalize(And(tuple(Not(m) for m in a.members)))
        if isinstance(a, Exists):
            return Forall(a.role, a.inverse, normalize(Not(a.filler)))
        if isinstance(a, Forall):
            return Exists(a.role, a.inverse, normalize(Not(a.filler)))
    raise TypeError(f"not a class expression: {expr!r}")


def is_nnf(expr: ClassExpr) -> bool:
    if isinstance(expr, Not):
        return isinstance(expr.arg, Named)
    if isinstance(expr, (And, Or)):
        return all(is_nnf(m) for m in expr.members)
    if isinstance(expr, (Exists, Forall)):
        return is_nnf(expr.filler)
    return True


def class_names(expr: ClassExpr) -> set:
    if isinstance(expr, Named):
        return {expr.name}
    if isinstance(expr, Not):
        return class_names(expr.arg)
    if isinstance(expr, (And, Or)):
        return set().union(*(class_names(m) for m in expr.members))
    if isinstance(expr, (Exists, Forall)):
        return class_names(expr.filler)
    return set()


def role_names(expr: ClassExpr) -> set:
    if isinstance(expr, Not):
        return role_names(expr.arg)
    if isinstance(expr, (And, Or)):
        return set().union(*(role_names(m) for m in expr.members))
    if isinstance(expr, (Exists, Forall)):
        return {expr.role} | role_names(expr.filler)
    return set()


def rename_classes(expr: ClassExpr, mapping) -> ClassExpr:
    if isinstance(expr, Named):
        return Named(mapping.get(expr.name, expr.name))
    if isinstance(expr, Not):
        return Not(rename_classes(expr.arg, mapping))
    if isinstance(expr, (And, Or)):
        return type(expr)(tuple(rename_classes(m, mapping) for m in expr.members))
    if isinstance(expr, (Exists, Forall)):
        return type(expr)(expr.role, expr.inverse, rename_classes(expr.filler, mapping))
    return expr


# -- axioms ------------------------------------------------------------------

@dataclass(frozen=True)
class SubClass:
    sub: ClassExpr
    sup: ClassExpr

    def __str__(self):
        return f"{self.sub} SubClassOf {self.sup}"


@dataclass(frozen=True)
class Equivalent:
    left: ClassExpr
    right: ClassExpr

    def __str__(self):
        return f"{self.left} EquivalentTo {self.right}"


@dataclass(frozen=True)
class Disjoint:
    left: ClassExpr
    right: ClassExpr

    def __str__(self):
        return f"{self.left} DisjointWith {self.right}"


@dataclass(frozen=True)
class SubProperty:
    sub: str
    sup: str

    def __str__(self):
        return f"{self.sub} SubPropertyOf {self.sup}"


@dataclass(frozen=True)
class Domain:
    role: str
    cls: ClassExpr

    def __str__(self):
        return f"{self.role} Domain {self.cls}"


@dataclass(frozen=True)
class Range:
    role: str
    cls: ClassExpr

    def __str__(self):
        return f"{self.role} Range {self.cls}"


Axiom = Union[SubClass, Equivalent, Disjoint, SubProperty, Domain, Range]


def axiom_class_names(ax) -> set:
    if isinstance(ax, SubClass):
        return class_names(ax.sub) | class_names(ax.sup)
    if isinstance(ax, (Equivalent, Disjoint)):
        return class_names(ax.left) | class_names(ax.right)
    if isinstance(ax, (Domain, Range)):
        return class_names(ax.cls)
    return set()


def axiom_role_names(ax) -> set:
    if isinstance(ax, SubClass):
        return role_names(ax.sub) | role_names(ax.sup)
    if isinstance(ax, (Equivalent, Disjoint)):
        return role_names(ax.left) | role_names(ax.right)
    if isinstance(ax, (Domain, Range)):
        return {ax.role} | role_names(ax.cls)
    if isinstance(ax, SubProperty):
        return {ax.sub, ax.sup}
    return set()


def tbox_class_names(axioms) -> set:
    return set().union(*(axiom_class_names(a) for a in axioms)) if axioms else set()


@dataclass(frozen=True)
class MicroOntology:
    prefix: str
    iri: str
    title: str
    axioms: tuple = ()
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))

    def class_names(self) -> set:
        return tbox_class_names(self.axioms)

    def own_classes(self) -> set:
        """Qualified names declared under this ontology's own prefix."""
        return {c for c in self.class_names() if c.startswith(self.prefix + ":")}


@dataclass
class ABox:
    individuals: set = field(default_factory=set)
    types: list = field(default_factory=list)
    roles: list = field(default_factory=list)

    def add_type(self, ind, expr: ClassExpr):
        self.individuals.add(ind)
        self.types.append((ind, expr))

    def add_role(self, a, role: str, b):
        self.individuals.update((a, b))
        self.roles.append((a, role, b))

    def copy(self) -> "ABox":
        return ABox(set(self.individuals), list(self.types), list(self.roles))


def expand_brace_list(prefixes, local: str, known=None) -> ClassExpr:
    """``{we,ee}:country`` -> ``Or(we:country, ee:country)``."""
    prefixes = list(prefixes)
    if known is not None:
        for p in prefixes:
            if p not in known:
                raise UnknownPrefix(f"unknown ontology prefix {p!r}")
    return disj([Named(f"{p}:{local}") for p in prefixes])
