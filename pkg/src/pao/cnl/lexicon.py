"""Lexicon built from a sense inventory and a set of procedural templates."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..dl import Named, Not, Top
from .morph import lemma

PERSONAL_PRONOUNS = ("she", "he", "her", "him", "his")
NEUTER_PRONOUNS = ("it", "its")
POSSESSIVES = {"her", "his", "its"}
PERSON_CLASS_NAMES = ("person", "human")


@dataclass
class Lexicon:
    nouns: dict = field(default_factory=dict)         # lower lexeme -> list of sense groups
    proper_nouns: dict = field(default_factory=dict)  # lexeme as written -> list of sense groups
    verbs: dict = field(default_factory=dict)         # lemma -> list of template names
    properties: set = field(default_factory=set)
    prepositions: dict = field(default_factory=dict)  # surface -> role tag (slot name)
    pronouns: dict = field(default_factory=dict)      # surface -> ClassExpr constraint
    inventory: object = None
    templates: dict = field(default_factory=dict)

    def noun_senses(self, word: str):
        return self.nouns.get(word.lower())

    def is_proper(self, word: str) -> bool:
        return word in self.proper_nouns

    def verb_templates(self, surface: str):
        return self.verbs.get(lemma(surface.lower()), [])

    def property_name(self, word: str):
        return word if word in self.properties else None

    def possessive_property(self, noun: str):
        name = "has" + noun[:1].upper() + noun[1:]
        return name if name in self.properties else None


def _person_constraint(inventory):
    if inventory is None:
        return Top
    for wanted in PERSON_CLASS_NAMES:
        for lex in inventory.lexemes():
            if lex.lower() == wanted:
                return Named(inventory.groups[lex][0][0])
    return Top


def build_lexicon(inventory, templates=(), extra_properties=(), pronouns=None) -> Lexicon:
    lex = Lexicon(inventory=inventory)
    if inventory is not None:
        for lexeme, groups in inventory.groups.items():
            lex.nouns.setdefault(lexeme.lower(), []).extend(groups)
            if lexeme[:1].isupper():
                lex.proper_nouns[lexeme] = list(groups)
        lex.properties |= inventory.properties()
    lex.properties |= set(extra_properties)
    for t in templates:
        lex.templates[t.name] = t
        for lu in t.lexical_units:
            lex.verbs.setdefault(lu, []).append(t.name)
        for slot, _ in t.roles:
            if slot not in ("subject", "object"):
                lex.prepositions[slot] = slot
    person = _person_constraint(inventory)
    for p in PERSONAL_PRONOUNS:
        lex.pronouns[p] = person
    for p in NEUTER_PRONOUNS:
        lex.pronouns[p] = Top if person is Top else Not(person)
    if pronouns:
        lex.pronouns.update(pronouns)
    return lex
