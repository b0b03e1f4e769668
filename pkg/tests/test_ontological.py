from pathlib import Path

import pytest

from pao.cnl.ontological import load_ontologies, load_ontology, parse_ontological, read_header
from pao.dl import (And, Disjoint, Equivalent, Exists, Named, Not, Or, SubClass, SubProperty, Top)
from pao.errors import ParseError, UnknownPrefix
from conftest import DATA

N = Named


def one(text, prefix="x", **kw):
    axs = parse_ontological(text, prefix, **kw)
    assert len(axs) == 1
    return axs[0]


def test_every_is_a():
    assert one("Every library is a collection.", "pr") == SubClass(N("pr:library"), N("pr:collection"))


def test_subproperty():
    assert one("If X contains Y then X stores Y.", "fd") == SubProperty("contains", "stores")


def test_bidirectional_pair_is_equivalence():
    ax = one("Every East_Germany is a Germany. Every Germany is an East_Germany.", "ee")
    assert ax == Equivalent(N("ee:East_Germany"), N("ee:Germany"))


def test_disjointness_with_brace_lists():
    ax = one("No {we,ee}:country is an {we,og}:alliance.", "b1", known_prefixes={"we", "ee", "og"})
    assert ax == Disjoint(Or((N("we:country"), N("ee:country"))), Or((N("we:alliance"), N("og:alliance"))))


def test_domain_and_range_shapes():
    assert one("Everything that contains something is a Container.", "fd") == \
        SubClass(Exists("contains", False, Top), N("fd:Container"))
    assert one("Everything that is contained by something is a Food.", "fd") == \
        SubClass(Exists("contains", True, Top), N("fd:Food"))
    assert one("Everything that is contained by a Bottle is a Wine.", "fd") == \
        SubClass(Exists("contains", True, N("fd:Bottle")), N("fd:Wine"))
    assert one("Everything that something hasMother is a Mother.", "pp") == \
        SubClass(Exists("hasMother", True, Top), N("pp:Mother"))


def test_existential_and_passive():
    assert one("Every moon orbits a Terra.", "cal") == SubClass(N("cal:moon"), Exists("orbits", False, N("cal:Terra")))
    assert one("Every Soviet_satellite_state is involved by a Warsaw_Pact.", "ee", known_properties={"involves"}) == \
        SubClass(N("ee:Soviet_satellite_state"), Exists("involves", True, N("ee:Warsaw_Pact")))


def test_nested_relative_clause_axiom_4_4():
    ax = one("Every Prewar_Germany is a lg:Germany that is not involved by something that is a we:NATO "
             "or that is a ee:Warsaw_Pact.", "b1", known_prefixes={"lg", "we", "ee", "b1"},
             known_properties={"involves"})
    expected = SubClass(N("b1:Prewar_Germany"), And((N("lg:Germany"), Not(
        Exists("involves", True, Or((N("we:NATO"), N("ee:Warsaw_Pact"))))))))
    assert ax == expected


def test_negated_active_verb():
    ax = one("Every Phobos is something that does not orbit a cal:Terra.", "ast", known_prefixes={"cal", "ast"})
    assert ax == SubClass(N("ast:Phobos"), Not(Exists("orbits", False, N("cal:Terra"))))


def test_numbering_and_comments_are_ignored():
    axs = parse_ontological("# comment\n1.1 Every cat is a pet.\n\n1.2 Every pet is an animal. # trailing\n", "x")
    assert axs == [SubClass(N("x:cat"), N("x:pet")), SubClass(N("x:pet"), N("x:animal"))]


@pytest.mark.parametrize("bad,index", [
    ("Every cat is a pet", None),
    ("Every cat is a pet. Blah cat is a pet.", 2),
    ("Every cat frobs.", 1),
])
def test_parse_errors_carry_sentence_index(bad, index):
    with pytest.raises(ParseError) as e:
        parse_ontological(bad, "x")
    assert e.value.sentence_index == index


def test_parse_error_lists_expected_tokens():
    with pytest.raises(ParseError) as e:
        parse_ontological("Blah cat is a pet.", "x")
    assert "Every" in e.value.expected


def test_unknown_prefix():
    with pytest.raises(UnknownPrefix):
        parse_ontological("Every cat is a zz:pet.", "x", known_prefixes={"x"})


def test_header():
    assert read_header('@prefix fd http://example.org/Food.owl "Food"\n') == ("fd", "http://example.org/Food.owl", "Food")
    with pytest.raises(ParseError):
        read_header("Every cat is a pet.")


@pytest.mark.parametrize("path", sorted(str(p) for p in DATA.glob("*/*.ont")))
def test_golden_corpus_parses(path):
    onts = load_ontologies(sorted(str(p) for p in Path(path).parent.glob("*.ont")))
    assert all(o.axioms for o in onts)


def test_fig2_axiom_counts(geo_ontologies):
    counts = {o.prefix: len(o.axioms) for o in geo_ontologies}
    assert counts == {"b1": 4, "ee": 5, "eu": 4, "lg": 5, "og": 2, "ps": 3, "we": 4}


def test_load_ontology_keeps_source():
    text = (DATA / "lrrh" / "food.ont").read_text()
    o = load_ontology(text)
    assert o.prefix == "fd" and o.title == "Food" and o.source == text


def test_article_is_not_a_class_name():
    with pytest.raises(ParseError):
        parse_ontological("Every A is a B.", "x")
