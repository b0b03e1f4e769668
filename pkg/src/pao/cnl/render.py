"""Rendering resolved atoms back into controlled language."""

from __future__ import annotations

from ..errors import UnresolvedAmbiguity
from ..merge import mint_mwu
from ..rdf import Anon
from .factual import INVOCATION, NEGATED, PROPERTY, TYPE, Discourse, PronounRef
from .morph import lemma, participle


def _article(word: str) -> str:
    return "an" if word[:1].lower() in "aeiou" else "a"


def _id(x, capital=False) -> str:
    s = str(x)
    return s[:1].upper() + s[1:] if capital else s


def noun_display(lexeme: str, group, inventory, style: str = "narrative") -> str:
    if inventory is None:
        return lexeme
    return mint_mwu(lexeme, group, inventory, style)


def verb_display(verb: str, template: str, lexicon) -> str:
    if lexicon is not None and len(lexicon.verb_templates(verb)) > 1:
        return f"{template.lower()}-{verb}"
    return verb


def render_atom(atom, lexicon=None, style: str = "narrative") -> str:
    inv = lexicon.inventory if lexicon is not None else None
    subj = _id(atom.subject, capital=True)
    if atom.kind == TYPE:
        name = noun_display(atom.noun, atom.sense, inv, style)
        if style == "narrative" and atom.word and name == atom.noun:
            name = atom.word            # monosemous: keep the spelling of the text
        return f"{subj} is {_article(name)} {name}."
    if atom.kind == PROPERTY:
        return f"{subj} {atom.prop} {_id(atom.object)}."
    if atom.kind == NEGATED:
        name = noun_display(atom.noun, atom.sense, inv, style)
        if atom.inverse:
            return f"{subj} is not {participle(atom.prop)} by {_article(name)} {name}."
        return f"{subj} does not {lemma(atom.prop)} {_article(name)} {name}."
    if atom.kind == INVOCATION:
        words = [subj, verb_display(atom.verb, atom.template, lexicon)]
        for slot, arg in atom.args:
            if slot == "subject":
                continue
            if slot != "object":
                words.append(slot)
            words.append(_id(arg))
        return " ".join(words) + "."
    raise ValueError(f"unknown atom kind {atom.kind!r}")


def render_paraphrase(atoms, lexicon=None, style: str = "narrative") -> str:
    """One sentence per atom, e.g. ``Obj4 removing-takes obj15 from obj8.``"""
    open_sites = sorted({s for a in atoms if not a.resolved for s in a.sites}
                        | {arg.site for a in atoms for arg in a.arguments() if isinstance(arg, PronounRef)})
    if open_sites:
        raise UnresolvedAmbiguity(open_sites)
    return "".join(render_atom(a, lexicon, style) + "\n" for a in atoms)


def render_labelled(atoms, lexicon=None, style: str = "narrative") -> str:
    return "".join(f"{a.label}: {render_atom(a, lexicon, style)}\n" for a in atoms)


def reemit_text(discourse: Discourse, resolutions: dict, lexicon=None, style: str = "narrative") -> str:
    """The original text with senses and antecedents spelled out.

    ``resolutions`` maps site ids to the chosen sense group, template name
    or discourse id.  Pronouns become ``She-LittleRedRidingHood``.
    """
    inv = lexicon.inventory if lexicon is not None else None
    sentences = []
    for si, toks in enumerate(discourse.tokens):
        words = []
        for ti, tok in enumerate(toks):
            text = tok.text
            sid = discourse.token_sites.get((si, ti))
            if sid is not None and sid in resolutions:
                site = discourse.sites[sid]
                choice = resolutions[sid]
                if site.kind == "noun-sense":
                    text = noun_display(site.word, choice, inv, style)
                elif site.kind == "verb-sense":
                    text = f"{choice.lower()}-{tok.text}"
                elif site.kind == "antecedent" and isinstance(choice, Anon):
                    text = f"{tok.text}-{discourse.heads.get(choice, str(choice))}"
            if text in ".," and words:
                words[-1] += text
            else:
                words.append(text)
        sentences.append(" ".join(words))
    return " ".join(sentences)
