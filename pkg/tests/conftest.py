from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from pao.cnl.lexicon import build_lexicon
from pao.cnl.ontological import load_ontologies
from pao.merge import partition_senses
from pao.templates import load_templates

DATA = Path(__file__).resolve().parents[1] / "src" / "pao" / "data"

settings.register_profile("ci", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


def ont_paths(name):
    return sorted(str(p) for p in (DATA / name).glob("*.ont"))


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def geo_ontologies():
    return load_ontologies(ont_paths("geopolitics"))


@pytest.fixture(scope="session")
def geo_inventory(geo_ontologies):
    return partition_senses(geo_ontologies)


@pytest.fixture(scope="session")
def geo_lexicon(geo_inventory):
    return build_lexicon(geo_inventory, (), ["remembers"])


@pytest.fixture(scope="session")
def lrrh_inventory():
    return partition_senses(load_ontologies(ont_paths("lrrh")))


@pytest.fixture(scope="session")
def lrrh_templates():
    return load_templates(DATA / "lrrh" / "templates.tpl")


@pytest.fixture(scope="session")
def lrrh_lexicon(lrrh_inventory, lrrh_templates):
    return build_lexicon(lrrh_inventory, lrrh_templates)


@pytest.fixture(scope="session")
def story():
    return (DATA / "lrrh" / "story.txt").read_text()


@pytest.fixture(scope="session")
def lrrh_choices():
    from pao.wsd import parse_choices
    return parse_choices((DATA / "lrrh" / "choices.txt").read_text())


@pytest.fixture(scope="session")
def lrrh_resolved(story, lrrh_lexicon, lrrh_inventory, lrrh_templates, lrrh_choices):
    from pao.cnl.factual import parse_factual
    from pao.wsd import disambiguate
    d = parse_factual(story, lrrh_lexicon)
    return d, disambiguate(d, lrrh_inventory, lrrh_templates, lrrh_choices)


@pytest.fixture(scope="session")
def lrrh_execution(lrrh_resolved, lrrh_templates, lrrh_inventory):
    from pao.executor import execute_atoms
    return execute_atoms(lrrh_resolved[1].atoms, lrrh_templates, lrrh_inventory.merged_tbox)
