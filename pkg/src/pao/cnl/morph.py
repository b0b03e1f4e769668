"""Minimal English morphology for simple-present singular narrative."""

import re

_E_STEM_ENDINGS = ("v", "c", "g", "z", "u", "s")


def lemma(verb: str) -> str:
    """3rd-person-singular verb to lemma: takes -> take, carries -> carry."""
    if verb.endswith("ies") and len(verb) > 4:
        return verb[:-3] + "y"
    for suffix in ("sses", "shes", "ches", "xes", "zes", "oes"):
        if verb.endswith(suffix):
            return verb[:-2]
    if verb.endswith("s") and not verb.endswith("ss"):
        return verb[:-1]
    return verb


def third_person(lem: str) -> str:
    if lem.endswith("y") and len(lem) > 1 and lem[-2] not in "aeiou":
        return lem[:-1] + "ies"
    if lem.endswith(("s", "sh", "ch", "x", "z", "o")):
        return lem + "es"
    return lem + "s"


def participle(prop: str) -> str:
    """Property name (3sg form) to past participle: involves -> involved."""
    lem = lemma(prop)
    if lem.endswith("e"):
        return lem + "d"
    if lem.endswith("y") and len(lem) > 1 and lem[-2] not in "aeiou":
        return lem[:-1] + "ied"
    return lem + "ed"


def participle_to_property(part: str, known=()) -> str:
    """Recover the 3sg property name from a passive participle.

    Known property names win; otherwise a spelling heuristic decides
    whether the stem took a silent ``e``.
    """
    cands = []
    if part.endswith("ied"):
        cands.append(part[:-3] + "ies")
    if part.endswith("ed"):
        cands.append(third_person(part[:-1]))   # involved -> involve -> involves
        cands.append(third_person(part[:-2]))   # contained -> contain -> contains
    for c in cands:
        if c in known:
            return c
    if part.endswith("ied"):
        return cands[0]
    if part.endswith("ed"):
        stem = part[:-2]
        short_cvc = len(stem) <= 4 and stem.endswith(("r", "t", "k")) and re.search(r"[^aeiou][aeiou][^aeiou]$", stem)
        if stem.endswith(_E_STEM_ENDINGS) or short_cvc:
            return third_person(stem + "e")
        return third_person(stem)
    return part


def split_camel(word: str) -> list[str]:
    """LittleRedRidingHood -> [Little, Red, Riding, Hood]."""
    parts = re.findall(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z0-9]+|[A-Z]+", word)
    return parts or [word]
