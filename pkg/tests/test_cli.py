import json

import pytest
from click.testing import CliRunner

from conftest import DATA, ont_paths
from pao.cli import main

LRRH = DATA / "lrrh"


@pytest.fixture
def runner():
    return CliRunner()


def lrrh_args(*extra):
    args = ["run", str(LRRH / "story.txt"), "--templates", str(LRRH / "templates.tpl")]
    for p in ont_paths("lrrh"):
        args += ["-O", p]
    return args + list(extra)


def test_merge_report_and_inventory(runner, tmp_path):
    out = tmp_path / "inv.json"
    r = runner.invoke(main, ["merge", *ont_paths("geopolitics"), "-o", str(out)])
    assert r.exit_code == 0, r.output
    assert "ColdWarEasternEurope-Germany" in r.output
    assert "Germany" in json.loads(out.read_text())["groups"]


def test_merge_inconsistent_input(runner, tmp_path):
    bad = tmp_path / "bad.ont"
    bad.write_text('@prefix z urn:z "Z"\nEvery cat is a pet.\nNo cat is a pet.\n')
    r = runner.invoke(main, ["merge", str(bad)])
    assert r.exit_code == 2
    assert "error [merge]" in r.output


def test_merge_parse_error(runner, tmp_path):
    bad = tmp_path / "bad.ont"
    bad.write_text('@prefix z urn:z "Z"\nEvery cat pet.\n')
    r = runner.invoke(main, ["merge", str(bad)])
    assert r.exit_code == 1 and "error [parse]" in r.output


def test_run_with_choices(runner, tmp_path):
    trace = tmp_path / "trace.json"
    r = runner.invoke(main, lrrh_args("--choices", str(LRRH / "choices.txt"), "--trace-out", str(trace)))
    assert r.exit_code == 0, r.output
    for section in ("== Ambiguities ==", "== Paraphrase ==", "== Resolved text ==", "== Operations ==",
                    "== Trace =="):
        assert section in r.output
    assert "E: Obj4 removing-takes obj15 from obj8." in r.output
    assert "Inserted by planning because of procedural template precondition at step E." in r.output

    q = runner.invoke(main, ["query", str(trace), str(LRRH / "queries.rq"), *sum((["-O", p] for p in ont_paths("lrrh")), [])])
    assert q.exit_code == 0, q.output
    assert q.output.splitlines() == ["1. ?x = obj4", "2. yes", "3. ?x = obj8", "4. ?n = H"]


def test_query_json_and_quads(runner, tmp_path):
    trace = tmp_path / "trace.nq"
    r = runner.invoke(main, lrrh_args("--choices", str(LRRH / "choices.txt"), "--trace-out", str(trace)))
    assert r.exit_code == 0
    q = runner.invoke(main, ["query", str(trace), str(LRRH / "queries.rq"), "--json"])
    doc = json.loads(q.output)
    assert doc[1]["answer"] is True and doc[3]["answer"] == [{"n": "H"}]


def test_run_unresolved(runner):
    r = runner.invoke(main, lrrh_args())
    assert r.exit_code == 3
    assert "she@12" in r.output and "basket@15" in r.output


def test_run_interactive_and_record(runner, tmp_path):
    rec = tmp_path / "rec.txt"
    # she: candidates obj11, obj8, obj4 -> 3; basket: food, sports -> 1
    r = runner.invoke(main, lrrh_args("--interactive", "--record", str(rec)), input="3\n1\n")
    assert r.exit_code == 0, r.output
    assert rec.read_text() == "she@12 = obj4\nbasket@15 = fd:Basket\n"
    again = runner.invoke(main, lrrh_args("--choices", str(rec)))
    assert again.exit_code == 0 and "== Trace ==" in again.output


def test_run_parse_error(runner, tmp_path):
    text = tmp_path / "t.txt"
    text.write_text("She takes a basket from a farmhouse.")
    r = runner.invoke(main, ["run", str(text), *sum((["-O", p] for p in ont_paths("lrrh")), [])])
    assert r.exit_code == 1 and "error [parse]" in r.output


def test_run_inconsistent_state(runner, tmp_path):
    text = tmp_path / "t.txt"
    text.write_text("LittleRedRidingHood hasMother a farmhouse.")
    r = runner.invoke(main, ["run", str(text), *sum((["-O", p] for p in ont_paths("lrrh")), [])])
    assert r.exit_code == 2 and "snapshot C is inconsistent" in r.output


def test_run_where_unmatched(runner, tmp_path):
    text = tmp_path / "t.txt"
    text.write_text("LittleRedRidingHood carries a food-basket to a farmhouse.")
    r = runner.invoke(main, lrrh_args()[:1] + [str(text)] + lrrh_args()[2:])
    assert r.exit_code == 4 and "error [execute]" in r.output


def test_grandpa_with_choice(runner, tmp_path):
    choices = tmp_path / "c.txt"
    choices.write_text("Germany = ee\n")
    args = ["run", str(DATA / "geopolitics" / "grandpa.txt"), "--choices", str(choices),
            "--property", "remembers", "--style", "title"]
    for p in ont_paths("geopolitics"):
        args += ["-O", p]
    r = runner.invoke(main, args)
    assert r.exit_code == 0, r.output
    assert "A grandpa remembers a ColdWarEasternEurope-Germany that is not involved by a NATO." in r.output


def test_query_empty_trace(runner, tmp_path):
    t = tmp_path / "t.nq"
    t.write_text("")
    r = runner.invoke(main, ["query", str(t), str(LRRH / "queries.rq")])
    assert r.exit_code == 1
