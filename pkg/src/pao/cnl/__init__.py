"""Controlled-language front end: ontological texts, factual texts, paraphrases."""

from .ontological import load_ontology, load_ontology_file, parse_ontological
from .lexicon import Lexicon, build_lexicon
from .factual import ParaphraseAtom, Site, Discourse, parse_factual
from .render import render_paraphrase, reemit_text

__all__ = [
    "load_ontology", "load_ontology_file", "parse_ontological", "Lexicon", "build_lexicon",
    "ParaphraseAtom", "Site", "Discourse", "parse_factual", "render_paraphrase", "reemit_text",
]
