"""Sense hints for the grandpa sentence and its variable-style paraphrase.

    python scripts/grandpa_wsd.py [--choose ee]
"""

import argparse
from pathlib import Path

from pao.cnl.factual import parse_factual
from pao.cnl.lexicon import build_lexicon
from pao.cnl.ontological import load_ontologies
from pao.cnl.render import reemit_text
from pao.merge import partition_senses
from pao.wsd import ambiguity_report, disambiguate

DATA = Path(__file__).resolve().parents[1] / "src" / "pao" / "data" / "geopolitics"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--choose", default="ee", help="sense to record for 'Germany' (prefix, title or MWU)")
    args = ap.parse_args()

    inv = partition_senses(load_ontologies(sorted(DATA.glob("*.ont"))))
    lex = build_lexicon(inv, (), ["remembers"])
    for name in ("grandpa.txt", "grandpa_paraphrase.txt"):
        d = parse_factual((DATA / name).read_text(), lex)
        hinted = disambiguate(d, inv, strict=False)
        print(f"== {name} ==")
        print(ambiguity_report(hinted.items, inv, d), end="")
        chosen = disambiguate(d, inv, choices={"Germany": args.choose})
        print("resolved:", reemit_text(d, chosen.resolutions, lex, "title"), "\n")


if __name__ == "__main__":
    main()
