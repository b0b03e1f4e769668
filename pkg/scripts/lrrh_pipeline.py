"""Run the story end to end: parse, disambiguate, execute, query.

    python scripts/lrrh_pipeline.py [--trace-out trace.json]
"""

import argparse
from pathlib import Path

from pao.cnl.factual import parse_factual
from pao.cnl.lexicon import build_lexicon
from pao.cnl.ontological import load_ontologies
from pao.cnl.render import render_labelled, reemit_text
from pao.executor import execute_atoms
from pao.merge import partition_senses
from pao.query import evaluate, parse_queries, render_answer
from pao.templates import load_templates
from pao.wsd import ambiguity_report, disambiguate, parse_choices

DATA = Path(__file__).resolve().parents[1] / "src" / "pao" / "data" / "lrrh"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trace-out", help="write the trace as JSON")
    ap.add_argument("--choices", default=str(DATA / "choices.txt"))
    args = ap.parse_args()

    inv = partition_senses(load_ontologies(sorted(DATA.glob("*.ont"))))
    tpls = load_templates(DATA / "templates.tpl")
    lex = build_lexicon(inv, tpls)
    d = parse_factual((DATA / "story.txt").read_text(), lex)
    res = disambiguate(d, inv, tpls, parse_choices(Path(args.choices).read_text()))
    print("== Ambiguities ==\n" + ambiguity_report(res.items, inv, d))
    print("== Paraphrase ==\n" + render_labelled(res.atoms, lex))
    print("== Resolved text ==\n" + reemit_text(d, res.resolutions, lex) + "\n")
    ex = execute_atoms(res.atoms, tpls, inv.merged_tbox)
    print("== Operations ==\n" + ex.report())
    print("== Trace ==\n" + ex.trace.to_quads())
    print("== Answers ==")
    for k, q in enumerate(parse_queries((DATA / "queries.rq").read_text()), start=1):
        print(f"{k}. {render_answer(q, evaluate(q, ex.trace, inv.merged_tbox))}")
    if args.trace_out:
        Path(args.trace_out).write_text(ex.trace.dumps(), encoding="utf-8")


if __name__ == "__main__":
    main()
