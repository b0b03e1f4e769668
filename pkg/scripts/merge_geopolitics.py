"""Merge the geopolitics micro-ontologies and print the merge report.

    python scripts/merge_geopolitics.py [-o inventory.json]
"""

import argparse
import time
from pathlib import Path

from pao.cnl.ontological import load_ontologies
from pao.merge import partition_senses

DATA = Path(__file__).resolve().parents[1] / "src" / "pao" / "data"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-o", "--output", help="write the sense inventory as JSON")
    ap.add_argument("--fixture", default="geopolitics", choices=["geopolitics", "library", "moon", "lrrh"])
    args = ap.parse_args()

    t0 = time.perf_counter()
    inv = partition_senses(load_ontologies(sorted((DATA / args.fixture).glob("*.ont"))))
    elapsed = time.perf_counter() - t0
    print(inv.report(), end="")
    kept = sum(r.kept for r in inv.log)
    print(f"\n{len(inv.log)} probes, {kept} kept, {len(inv.inserted)} axioms inserted, {elapsed:.2f}s")
    if args.output:
        Path(args.output).write_text(inv.dumps(), encoding="utf-8")


if __name__ == "__main__":
    main()
