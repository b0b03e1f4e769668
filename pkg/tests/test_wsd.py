import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pao.cnl.factual import parse_factual
from pao.cnl.lexicon import build_lexicon
from pao.cnl.ontological import load_ontology
from pao.errors import NoAntecedent, ParseError, UnresolvedAmbiguity
from pao.merge import partition_senses
from pao.rdf import Anon
from pao.reasoner import KnowledgeBase, Verdict, brute_force_consistent
from pao.wsd import (INVALID, VALID, ambiguity_report, atoms_to_abox, disambiguate, hint_noun_senses,
                     is_site_id, parse_choices, substitute)


def items(result):
    return {i.id: i for i in result.items}


def test_story_hints(story, lrrh_lexicon, lrrh_inventory, lrrh_templates):
    d = parse_factual(story, lrrh_lexicon)
    res = disambiguate(d, lrrh_inventory, lrrh_templates, strict=False)
    it = items(res)
    assert it["she@12"].hints == ((Anon(11), VALID), (Anon(8), INVALID), (Anon(4), VALID))
    assert it["take@13"].hints == (("Removing", VALID), ("Bringing", INVALID))
    assert it["take@13"].resolution == "Removing" and it["take@13"].how == "auto"
    assert [h for _, h in it["basket@15"].hints] == [VALID, VALID]
    assert {i.id for i in res.unresolved()} == {"she@12", "basket@15"}


def test_story_choices(lrrh_resolved):
    _, res = lrrh_resolved
    assert res.resolutions["she@12"] == Anon(4)
    assert res.resolutions["basket@15"] == ("fd:Basket",)
    assert all(a.resolved for a in res.atoms)
    assert res.atoms[4].template == "Removing" and res.atoms[6].template == "Bringing"


def test_strict_raises(story, lrrh_lexicon, lrrh_inventory, lrrh_templates):
    d = parse_factual(story, lrrh_lexicon)
    with pytest.raises(UnresolvedAmbiguity, match="she@12"):
        disambiguate(d, lrrh_inventory, lrrh_templates)


def test_callback_answers(story, lrrh_lexicon, lrrh_inventory, lrrh_templates):
    d = parse_factual(story, lrrh_lexicon)
    asked = []

    def cb(item):
        asked.append(item.id)
        return item.valid()[-1]

    res = disambiguate(d, lrrh_inventory, lrrh_templates, callback=cb)
    assert asked == ["she@12", "basket@15"]
    assert res.resolutions["she@12"] == Anon(4)


def test_bad_choice_value(story, lrrh_lexicon, lrrh_inventory, lrrh_templates):
    d = parse_factual(story, lrrh_lexicon)
    with pytest.raises(ParseError):
        disambiguate(d, lrrh_inventory, lrrh_templates, {"basket": "nonsense", "she": "obj4"})


def test_choice_spellings(story, lrrh_lexicon, lrrh_inventory, lrrh_templates):
    d = parse_factual(story, lrrh_lexicon)
    for basket in ("food", "fd", "fd:Basket", "food-basket", "Food"):
        res = disambiguate(d, lrrh_inventory, lrrh_templates, {"she@12": "obj4", "basket@15": basket})
        assert res.resolutions["basket@15"] == ("fd:Basket",)


def test_parse_choices():
    assert parse_choices("# c\nshe = obj4\n\nbasket=food # x\n") == {"she": "obj4", "basket": "food"}
    with pytest.raises(ParseError):
        parse_choices("she obj4\n")
    assert is_site_id("she@12") and not is_site_id("she")


def test_no_antecedent(lrrh_lexicon, lrrh_inventory, lrrh_templates):
    d = parse_factual("There is a farmhouse. She lives in the farmhouse.", lrrh_lexicon)
    with pytest.raises(NoAntecedent):
        disambiguate(d, lrrh_inventory, lrrh_templates)


def test_grandpa_hints(geo_lexicon, geo_inventory, data_dir):
    d = parse_factual((data_dir / "geopolitics" / "grandpa.txt").read_text(), geo_lexicon)
    res = disambiguate(d, geo_inventory, strict=False)
    (item,) = res.items
    assert [(g, h) for g, h in item.hints] == [
        (("ee:Germany",), VALID), (("eu:Germany", "we:Germany"), INVALID), (("lg:Germany",), VALID)]
    assert "Europe2007-Germany {eu:Germany, we:Germany}" in ambiguity_report(res.items, geo_inventory, d)


def test_determinism(story, lrrh_lexicon, lrrh_inventory, lrrh_templates, lrrh_choices):
    runs = [disambiguate(parse_factual(story, lrrh_lexicon), lrrh_inventory, lrrh_templates, lrrh_choices)
            for _ in range(3)]
    assert len({(r.atoms, r.items) for r in runs}) == 1


@settings(max_examples=30)
@given(st.permutations(["she", "basket", "take"]), st.sets(st.sampled_from(["she", "basket", "take"])))
def test_choice_subsets(story, lrrh_lexicon, lrrh_inventory, lrrh_templates, lrrh_choices, order, keep):
    choices = {k: lrrh_choices[k] for k in order if k in keep}
    res = disambiguate(parse_factual(story, lrrh_lexicon), lrrh_inventory, lrrh_templates, choices,
                       strict=False)
    open_words = {i.site.word.lower() for i in res.unresolved()}
    assert open_words == {"she", "basket"} - keep


# -- hint soundness against exhaustive model search ------------------------------------

BAT = [
    '@prefix zo urn:zo "Zoo"\nEvery bat is an animal.\nEvery keeper is a person.\n'
    'Everything that something feeds is an animal.\n',
    '@prefix sp urn:sp "Sport"\nEvery bat is a tool.\nEvery club is a tool.\n',
    '@prefix br urn:br "Bridge"\nNo zo:animal is a sp:tool.\n',
]


@pytest.fixture(scope="module")
def bat_world():
    inv = partition_senses([load_ontology(t) for t in BAT])
    return inv, build_lexicon(inv, (), ["feeds"])


@pytest.mark.parametrize("text", ["A keeper feeds a bat.", "There is a bat.", "A keeper feeds a club."])
def test_noun_hints_agree_with_models(bat_world, text):
    inv, lex = bat_world
    d = parse_factual(text, lex)
    for site in d.site_list():
        hints = hint_noun_senses(d.atoms, site, inv)
        for cand, hint in hints:
            abox = atoms_to_abox(substitute(a, {site.id: cand}) for a in d.atoms)
            truth = brute_force_consistent(KnowledgeBase(tuple(inv.merged_tbox), abox), 2)
            assert (hint == VALID) == (truth == Verdict.SAT), (site.id, cand)


def test_bat_sense_resolves_automatically(bat_world):
    inv, lex = bat_world
    res = disambiguate(parse_factual("A keeper feeds a bat.", lex), inv)
    (item,) = res.items
    assert item.resolution == ("zo:bat",) and item.how == "auto"
