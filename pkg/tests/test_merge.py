import glob

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from conftest import DATA, ont_paths
from pao.cnl.ontological import load_ontologies, load_ontology
from pao.dl import Disjoint, Equivalent, MicroOntology, Named, Not, SubClass
from pao.errors import InconsistentInput
from pao.merge import SenseInventory, merge_as_single, mint_mwu, partition_senses
from pao.reasoner import is_coherent


def verdicts(inv):
    return {(r.sub, r.sup): r.kept for r in inv.log}


def test_germany_and_federation_split(geo_inventory):
    g = geo_inventory.groups["Germany"]
    assert len(g) >= 2
    we = next(x for x in g if "we:Germany" in x)
    assert "ee:Germany" not in we
    assert len(geo_inventory.groups["federation"]) >= 2
    fed = geo_inventory.groups["federation"]
    assert not any({"eu:federation", "og:federation"} <= set(x) for x in fed)


def test_we_ee_germany_rejected_both_ways(geo_inventory):
    v = verdicts(geo_inventory)
    assert v[("we:Germany", "ee:Germany")] is False
    assert v[("ee:Germany", "we:Germany")] is False


def test_expected_partition(geo_inventory):
    # derived by running the procedure and auditing each insertion by hand
    assert geo_inventory.groups["Germany"] == [("ee:Germany",), ("eu:Germany", "we:Germany"), ("lg:Germany",)]
    assert geo_inventory.groups["alliance"] == [("ee:alliance", "og:alliance", "we:alliance")]


def test_mwu_names(geo_inventory):
    names = {geo_inventory.display_name(g) for g in geo_inventory.groups["Germany"]}
    assert names == {"ColdWarEasternEurope-Germany", "Europe2007-Germany", "Language-Germany"}
    (ps,) = geo_inventory.groups["grandpa"]
    assert mint_mwu("grandpa", ps, geo_inventory) == "grandpa"


def test_narrative_style_and_alias(lrrh_inventory):
    food = next(g for g in lrrh_inventory.groups["Basket"] if "fd:Basket" in g)
    assert mint_mwu("Basket", food, lrrh_inventory, "narrative") == "food-basket"
    inv = partition_senses(lrrh_inventory.ontologies, aliases={"fd:Basket": "Hamper"})
    assert inv.display_name(food) == "Hamper"


def test_log_completeness(geo_inventory):
    same_named = {}
    for o in geo_inventory.ontologies:
        for q in o.own_classes():
            same_named.setdefault(q.split(":")[1], []).append(q)
    expected = sum(len(v) * (len(v) - 1) for v in same_named.values())
    assert len(geo_inventory.log) == expected
    assert len({(r.sub, r.sup) for r in geo_inventory.log}) == expected


def test_merged_tbox_is_coherent(geo_inventory):
    assert is_coherent(geo_inventory.merged_tbox)


def test_kept_axioms_never_rescue(geo_inventory):
    base = [ax for o in geo_inventory.ontologies for ax in o.axioms]
    for i in range(len(geo_inventory.inserted)):
        rest = geo_inventory.inserted[:i] + geo_inventory.inserted[i + 1:]
        assert is_coherent(base + rest)


def test_idempotence(geo_inventory):
    again = partition_senses([merge_as_single(geo_inventory)])
    assert again.inserted == [] and again.log == []
    extra = MicroOntology("mx", "urn:mx", "Merged", tuple(geo_inventory.inserted))
    rerun = partition_senses(list(geo_inventory.ontologies) + [extra])
    assert rerun.groups == geo_inventory.groups
    assert all(r.kept == verdicts(geo_inventory)[(r.sub, r.sup)] for r in rerun.log)


def test_library_polysemy():
    inv = partition_senses(load_ontologies(ont_paths("library")))
    names = {inv.display_name(g) for g in inv.groups["library"]}
    assert names == {"Building-library", "Programming-library"}


def test_moon_one_directional():
    inv = partition_senses(load_ontologies(ont_paths("moon")))
    v = verdicts(inv)
    assert v[("cal:moon", "ast:moon")] is True
    assert v[("ast:moon", "cal:moon")] is False
    assert len(inv.groups["moon"]) == 2
    assert SubClass(Named("cal:moon"), Named("ast:moon")) in inv.inserted


def test_disjoint_vocabularies_give_plain_union():
    a = load_ontology('@prefix a urn:a "A"\nEvery cat is a pet.\n')
    b = load_ontology('@prefix b urn:b "B"\nEvery car is a vehicle.\n')
    inv = partition_senses([a, b])
    assert inv.inserted == [] and inv.log == []
    assert "(none)" in inv.report().split("MWU table:")[1]


def test_inconsistent_input_is_named():
    bad = load_ontology('@prefix z urn:z "Z"\nEvery cat is a pet.\nNo cat is a pet.\n')
    with pytest.raises(InconsistentInput, match="'z'"):
        partition_senses([bad])


def test_json_round_trip(geo_inventory):
    back = SenseInventory.loads(geo_inventory.dumps())
    assert back.groups == geo_inventory.groups
    assert back.merged_tbox == geo_inventory.merged_tbox
    assert [r.to_json() for r in back.log] == [r.to_json() for r in geo_inventory.log]
    assert back.report() == geo_inventory.report()


# -- properties over random micro-ontologies ----------------------------------------

LOCALS = ("p", "q", "r")


def _axiom(prefix):
    name = st.sampled_from(LOCALS).map(lambda n: Named(f"{prefix}:{n}"))
    return st.one_of(
        st.builds(SubClass, name, name),
        st.builds(Disjoint, name, name),
        st.builds(lambda a, b: SubClass(a, Not(b)), name, name),
    )


def _ontology(prefix):
    return st.lists(_axiom(prefix), min_size=1, max_size=3).map(
        lambda axs: MicroOntology(prefix, f"urn:{prefix}", prefix.upper(), tuple(axs)))


@settings(max_examples=40, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(_ontology("x"), _ontology("y"), _ontology("z"))
def test_random_merge_properties(x, y, z):
    for o in (x, y, z):
        assume(is_coherent(o.axioms))
    inv = partition_senses([x, y, z])
    base = [ax for o in (x, y, z) for ax in o.axioms]
    assert is_coherent(inv.merged_tbox)
    for i in range(len(inv.inserted)):
        assert is_coherent(base + inv.inserted[:i] + inv.inserted[i + 1:])
    pairs = {(r.sub, r.sup) for r in inv.log}
    assert all((b, a) in pairs for a, b in pairs)
    for lex, groups in inv.groups.items():
        members = [q for g in groups for q in g]
        assert len(members) == len(set(members))
        names = [inv.display_name(g) for g in groups]
        assert len(names) == len(set(names))
    for ax in inv.inserted:
        if isinstance(ax, Equivalent):
            assert inv.group_of(ax.left.name) == inv.group_of(ax.right.name)
