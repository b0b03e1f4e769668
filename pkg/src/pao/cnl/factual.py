"""Factual (narrative) sentences to paraphrase atoms.

Every noun phrase that introduces an individual gets the discourse id
``objN`` where ``N`` is the 1-based index of its head noun among the word
tokens of the whole text.  CamelCase proper nouns count one token per word
part and an elided subject after ``and`` occupies one position.

Each clause contributes its atoms in a fixed order: the subject's type
atom (when the subject is introduced there), the clause atom itself, the
atoms of noun phrases introduced in object or prepositional position, and
finally the property atoms of possessives.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from ..dl import ClassExpr, Named, Top, disj
from ..errors import ParseError, UnknownAntecedent, UnknownWord
from ..rdf import Anon, step_labels
from .lexicon import POSSESSIVES, Lexicon
from .morph import lemma, participle_to_property, split_camel, third_person

TYPE = "type-assertion"
PROPERTY = "property-assertion"
INVOCATION = "template-invocation"
NEGATED = "negated-existential"

_WORD_RE = re.compile(r"[A-Za-z][\w-]*|[.,]")
_OBJ_RE = re.compile(r"^[Oo]bj(\d+)$")
_VAR_RE = re.compile(r"^X\d+$")
ARTICLES = {"a", "an"}


@dataclass(frozen=True)
class PronounRef:
    """Placeholder for an argument whose antecedent is still open."""

    site: str

    def __str__(self):
        return f"<{self.site}>"


@dataclass(frozen=True)
class Site:
    """A position in the text where a choice is needed."""

    id: str
    kind: str                 # noun-sense | verb-sense | antecedent
    word: str
    position: int
    candidates: tuple
    constraint: ClassExpr | None = None


@dataclass(frozen=True)
class ParaphraseAtom:
    label: str
    kind: str
    subject: object
    object: object = None
    noun: str | None = None         # lexeme of a type atom or negated filler
    senses: tuple = ()              # candidate sense groups for ``noun``
    sense: tuple | None = None      # chosen sense group
    prop: str | None = None
    inverse: bool = False
    verb: str | None = None         # surface verb of an invocation
    templates: tuple = ()
    template: str | None = None
    args: tuple = ()                # (slot, id) pairs of an invocation
    sites: tuple = ()
    word: str | None = field(default=None, compare=False)   # head noun as written

    def arguments(self) -> list:
        if self.kind == INVOCATION:
            return [a for _, a in self.args]
        return [a for a in (self.subject, self.object) if a is not None]

    @property
    def resolved(self) -> bool:
        if any(isinstance(a, PronounRef) for a in self.arguments()):
            return False
        if self.kind in (TYPE, NEGATED):
            return self.sense is not None
        if self.kind == INVOCATION:
            return self.template is not None
        return True

    def polysemy_resolved(self) -> dict:
        out = {}
        if self.noun:
            out[self.noun] = self.sense is not None
        if self.verb:
            out[self.verb] = self.template is not None
        return out


@dataclass
class Token:
    text: str
    pos: int                   # position of the token's last word part; 0 for punctuation


@dataclass
class Discourse:
    """Parse result: atoms in narrative order plus everything needed to resolve them."""

    atoms: list = field(default_factory=list)
    sites: dict = field(default_factory=dict)          # site id -> Site
    introduced: list = field(default_factory=list)     # Anon ids in order of introduction
    heads: dict = field(default_factory=dict)          # Anon -> head noun as written
    variables: dict = field(default_factory=dict)      # "X1" -> Anon
    tokens: list = field(default_factory=list)         # per sentence: list of Token
    token_sites: dict = field(default_factory=dict)    # (sentence, token index) -> site id
    available: dict = field(default_factory=dict)      # site id -> ids introduced before it

    def site_list(self) -> list[Site]:
        return [self.sites[k] for k in self.sites]

    def unresolved_atoms(self):
        return [a for a in self.atoms if not a.resolved]


def _width(word: str) -> int:
    if word[:1].isupper() and not _OBJ_RE.match(word) and not _VAR_RE.match(word):
        return len(split_camel(word.replace("-", "")))
    return 1


def tokenize_factual(text: str, lexicon: Lexicon) -> list[list[Token]]:
    """Split into sentences of positioned tokens."""
    raw = _WORD_RE.findall(text)
    sentences, cur, pos = [], [], 0
    for i, w in enumerate(raw):
        if w in ".,":
            cur.append(Token(w, 0))
            if w == ".":
                sentences.append(cur)
                cur = []
            continue
        if cur and cur[-1].text.lower() == "and" and _looks_verbal(w, lexicon):
            pos += 1                     # elided subject of a coordinated VP
        pos += _width(w)
        cur.append(Token(w, pos))
    if cur:
        raise ParseError("sentence is not terminated by a period", expected={"."})
    return sentences


def _split_mwu(word: str):
    if "-" in word:
        head, rest = word.split("-", 1)
        return head, rest
    return None, word


def _looks_verbal(word: str, lexicon: Lexicon) -> bool:
    _, v = _split_mwu(word)
    low = v.lower()
    return bool(lexicon.verb_templates(low)) or v in lexicon.properties or low in ("is", "does")


class _Parser:
    def __init__(self, toks, index, lexicon: Lexicon, d: Discourse):
        self.toks = [t for t in toks if t.text != ","]
        self.index = index
        self.lex = lexicon
        self.d = d
        self.i = 0
        self.subject = None

    # -- helpers -----------------------------------------------------------
    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def low(self, k=0):
        t = self.peek(k)
        return t.text.lower() if t else None

    def next(self) -> Token:
        t = self.peek()
        if t is None or t.text == ".":
            self.fail("unexpected end of sentence", {"<word>"})
        self.i += 1
        return t

    def expect(self, *words):
        t = self.next()
        if t.text.lower() not in words:
            self.fail(f"unexpected {t.text!r}", set(words))
        return t

    def fail(self, msg, expected=None):
        raise ParseError(msg, sentence_index=self.index, expected=expected)

    def at_end(self):
        return self.peek() is None or self.peek().text == "."

    def _tok_index(self, tok):
        return self.d.tokens[self.index - 1].index(tok)

    # -- discourse bookkeeping ----------------------------------------------
    def introduce(self, tok: Token, head: str) -> Anon:
        obj = Anon(tok.pos)
        if obj not in self.d.introduced:
            self.d.introduced.append(obj)
        self.d.heads.setdefault(obj, head)
        return obj

    def add_site(self, tok, kind, word, candidates, constraint=None) -> str:
        sid = f"{word.lower()}@{tok.pos}"
        self.d.sites[sid] = Site(sid, kind, word, tok.pos, tuple(candidates), constraint)
        self.d.token_sites[(self.index - 1, self._tok_index(tok))] = sid
        self.d.available[sid] = tuple(reversed(self.d.introduced))
        return sid

    # -- nouns -----------------------------------------------------------------
    def noun(self):
        """Head noun -> (token, lexeme, candidate sense groups)."""
        tok = self.next()
        word = tok.text
        senses = self.lex.noun_senses(word)
        if senses:
            return tok, _lexeme_of(word, self.lex), tuple(senses)
        prefix, rest = _split_mwu(word)
        if prefix is not None and self.lex.noun_senses(rest):
            inv = self.lex.inventory
            picked = [g for g in self.lex.noun_senses(rest)
                      if _sense_matches(prefix, g, inv)]
            if picked:
                return tok, _lexeme_of(rest, self.lex), tuple(picked)
        raise UnknownWord(f"unknown noun {word!r}", sentence_index=self.index, expected={"<noun>"})

    def type_atom(self, obj, tok, lexeme, senses) -> ParaphraseAtom:
        sites = ()
        sense = senses[0] if len(senses) == 1 else None
        if sense is None:
            sites = (self.add_site(tok, "noun-sense", lexeme, senses),)
        return ParaphraseAtom("", TYPE, obj, noun=lexeme, senses=senses, sense=sense, sites=sites,
                              word=_split_mwu(tok.text)[1])

    def filler(self):
        """``a NOUN`` used as a class, not as an individual."""
        self.expect(*ARTICLES)
        tok, lexeme, senses = self.noun()
        sense = senses[0] if len(senses) == 1 else None
        sites = () if sense else (self.add_site(tok, "noun-sense", lexeme, senses),)
        return lexeme, senses, sense, sites

    def negated(self, subject, prop, inverse) -> ParaphraseAtom:
        lexeme, senses, sense, sites = self.filler()
        return ParaphraseAtom("", NEGATED, subject, noun=lexeme, senses=senses, sense=sense,
                              prop=prop, inverse=inverse, sites=sites)

    def variable(self):
        if self.peek() is not None and _VAR_RE.match(self.peek().text):
            return self.next().text
        return None

    def property_of(self, tok) -> str:
        if tok.text in self.lex.properties:
            return tok.text
        raise UnknownWord(f"unknown verb {tok.text!r}", sentence_index=self.index, expected={"<verb>"})

    # -- noun phrases ------------------------------------------------------------
    def np_ref(self, intro, poss, parallel=None):
        """A noun phrase denoting an individual; appends introduced atoms."""
        tok = self.peek()
        if tok is None or tok.text == ".":
            self.fail("expected a noun phrase", {"a", "an", "the", "<name>", "<pronoun>"})
        low = tok.text.lower()
        m = _OBJ_RE.match(tok.text)
        if m:
            self.next()
            obj = Anon(int(m.group(1)))
            if obj not in self.d.introduced:
                self.d.introduced.append(obj)
            return obj
        if low in ARTICLES:
            self.next()
            ntok, lexeme, senses = self.noun()
            obj = self.introduce(ntok, ntok.text)
            var = self.variable()
            if var:
                self.d.variables[var] = obj
            intro.append(self.type_atom(obj, ntok, lexeme, senses))
            if self.low() == "that":
                self.relative(obj, intro)
            return obj
        if low == "something":
            ntok = self.next()
            return self.introduce(ntok, "something")
        if low == "the":
            self.next()
            return self.definite()
        if low in POSSESSIVES and self.peek(1) is not None and self._is_noun(self.peek(1).text):
            self.next()
            return self.possessive(poss)
        if low in self.lex.pronouns:
            ptok = self.next()
            if low == "it" and parallel is not None:
                return parallel
            return self.pronoun(ptok)
        if self.lex.is_proper(tok.text):
            ntok, lexeme, senses = self.noun()
            for prev in reversed(self.d.introduced):
                if self.d.heads.get(prev) == ntok.text:
                    return prev
            obj = self.introduce(ntok, ntok.text)
            intro.append(self.type_atom(obj, ntok, lexeme, senses))
            return obj
        raise UnknownWord(f"unknown word {tok.text!r}", sentence_index=self.index,
                          expected={"a", "an", "the", "<name>", "<pronoun>"})

    def _is_noun(self, word):
        if self.lex.noun_senses(word):
            return True
        prefix, rest = _split_mwu(word)
        return prefix is not None and bool(self.lex.noun_senses(rest))

    def definite(self):
        ntok, lexeme, senses = self.noun()
        var = self.variable()
        if var:
            if var not in self.d.variables:
                raise UnknownAntecedent(f"variable {var} was never introduced", sentence_index=self.index)
            return self.d.variables[var]
        for prev in reversed(self.d.introduced):
            if self.d.heads.get(prev, "").lower() == ntok.text.lower():
                return prev
        if not self.d.introduced:
            raise UnknownAntecedent(f"'the {ntok.text}' has no antecedent", sentence_index=self.index)
        constraint = disj([Named(g[0]) for g in senses])
        sid = self.add_site(ntok, "antecedent", ntok.text, reversed(self.d.introduced), constraint)
        return PronounRef(sid)

    def pronoun(self, ptok):
        if not self.d.introduced:
            raise UnknownAntecedent(f"pronoun {ptok.text!r} has no antecedent", sentence_index=self.index)
        constraint = self.lex.pronouns.get(ptok.text.lower(), Top)
        sid = self.add_site(ptok, "antecedent", ptok.text, reversed(self.d.introduced), constraint)
        return PronounRef(sid)

    def possessive(self, poss):
        ntok = self.next()
        prop = self.lex.possessive_property(ntok.text)
        if prop is None:
            raise ParseError(f"no property has{ntok.text[:1].upper()}{ntok.text[1:]} for the possessive",
                             sentence_index=self.index)
        obj = self.introduce(ntok, ntok.text)
        owner = self.subject
        poss.append(ParaphraseAtom("", PROPERTY, owner, obj, prop=prop))
        return obj

    def relative(self, obj, intro):
        self.expect("that")
        if self.low() == "is":
            self.next()
            neg = False
            if self.low() == "not":
                self.next()
                neg = True
            part = self.next().text
            self.expect("by")
            prop = participle_to_property(part, self.lex.properties)
            if neg:
                intro.append(self.negated(obj, prop, True))
            else:
                agent = self.np_ref(intro, [])
                intro.append(ParaphraseAtom("", PROPERTY, agent, obj, prop=prop))
            return
        if self.low() == "does":
            self.next()
            self.expect("not")
            prop = third_person(self.next().text)
            intro.append(self.negated(obj, prop, False))
            return
        prop = self.property_of(self.next())
        target = self.np_ref(intro, [])
        intro.append(ParaphraseAtom("", PROPERTY, obj, target, prop=prop))

    # -- clauses ---------------------------------------------------------------------
    def sentence(self) -> list:
        if self.low() == "there":
            self.next()
            self.expect("is")
            intro = []
            self.np_ref(intro, [])
            return intro
        if self.low() == "it" and self.low(1) == "is" and self.low(2) == "false":
            self.next(), self.next(), self.next()
            self.expect("that")
            return self.false_that()
        intro, poss = [], []
        self.subject = self.np_ref(intro, poss)
        atoms = intro
        main, post, poss2, obj = self.vp(None)
        atoms += main + post + poss + poss2
        while self.low() == "and":
            self.next()
            main, post, poss2, obj = self.vp(obj)
            atoms += main + post + poss2
        return atoms

    def false_that(self):
        if self.low() in ARTICLES:
            lexeme, senses, sense, sites = self.filler()
            prop = self.property_of(self.next())
            target = self.np_ref([], [])
            return [ParaphraseAtom("", NEGATED, target, noun=lexeme, senses=senses, sense=sense,
                                   prop=prop, inverse=True, sites=sites)]
        subj = self.np_ref([], [])
        prop = self.property_of(self.next())
        return [self.negated(subj, prop, False)]

    def vp(self, prev_obj):
        """One verb phrase of the current subject -> (main, intros, possessives, direct object)."""
        subj = self.subject
        post, poss = [], []
        if self.low() == "is":
            self.next()
            if self.low() == "not":
                self.next()
                part = self.next().text
                self.expect("by")
                prop = participle_to_property(part, self.lex.properties)
                return [self.negated(subj, prop, True)], post, poss, None
            if self.low() in ARTICLES:
                self.next()
                ntok, lexeme, senses = self.noun()
                self.d.heads.setdefault(subj, ntok.text) if isinstance(subj, Anon) else None
                return [self.type_atom(subj, ntok, lexeme, senses)], post, poss, None
            part = self.next().text
            self.expect("by")
            prop = participle_to_property(part, self.lex.properties)
            agent = self.np_ref(post, poss)
            return [ParaphraseAtom("", PROPERTY, agent, subj, prop=prop)], post, poss, None
        if self.low() == "does":
            self.next()
            self.expect("not")
            prop = third_person(self.next().text)
            return [self.negated(subj, prop, False)], post, poss, None

        vtok = self.next()
        prefix, verb = _split_mwu(vtok.text)
        names = self.lex.verb_templates(verb)
        if prefix is not None:
            names = [n for n in names if n.lower() == prefix.lower()]
        if names:
            args = [("subject", subj)]
            obj = None
            if not self.at_end() and self.low() not in self.lex.prepositions and self.low() != "and":
                obj = self.np_ref(post, poss, parallel=prev_obj)
                args.append(("object", obj))
            while not self.at_end() and self.low() in self.lex.prepositions:
                slot = self.lex.prepositions[self.next().text.lower()]
                args.append((slot, self.np_ref(post, poss, parallel=prev_obj)))
            sites = ()
            template = names[0] if len(names) == 1 else None
            if template is None:
                sites = (self.add_site(vtok, "verb-sense", lemma(verb.lower()), names),)
            atom = ParaphraseAtom("", INVOCATION, subj, obj, verb=verb, templates=tuple(names),
                                  template=template, args=tuple(args), sites=sites)
            return [atom], post, poss, obj
        if prefix is None and verb in self.lex.properties:
            obj = self.np_ref(post, poss, parallel=prev_obj)
            return [ParaphraseAtom("", PROPERTY, subj, obj, prop=verb)], post, poss, obj
        raise UnknownWord(f"unknown verb {vtok.text!r}", sentence_index=self.index, expected={"<verb>"})

    def parse(self):
        atoms = self.sentence()
        if not self.at_end():
            self.fail(f"trailing tokens from {self.peek().text!r}", {"."})
        return atoms


def _lexeme_of(word, lexicon):
    """The inventory's spelling of a noun (case-insensitive match)."""
    inv = lexicon.inventory
    if inv is not None:
        for lex in inv.groups:
            if lex.lower() == word.lower():
                return lex
    return word


def _sense_matches(prefix: str, group, inventory) -> bool:
    p = prefix.lower()
    for q in group:
        pre = q.split(":", 1)[0]
        if p == pre.lower():
            return True
        if inventory is not None and p == inventory.title(pre).lower():
            return True
    return False


def parse_factual(text: str, lexicon: Lexicon) -> Discourse:
    d = Discourse()
    d.tokens = tokenize_factual(text, lexicon)
    atoms = []
    for i, toks in enumerate(d.tokens, start=1):
        atoms.extend(_Parser(toks, i, lexicon, d).parse())
    labels = step_labels(len(atoms))
    d.atoms = [replace(a, label=lab) for a, lab in zip(atoms, labels)]
    return d
