"""Compare the tableau with exhaustive model search on random knowledge bases.

    python scripts/oracle_suite.py [-n 1000] [--seed 1] [--domain 3]
"""

import argparse
import random
import sys
import time
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from strategies import random_kb  # noqa: E402

from pao.errors import BudgetExceeded  # noqa: E402
from pao.reasoner import KnowledgeBase, Verdict, brute_force_consistent, is_consistent  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-n", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--domain", type=int, default=3, help="largest domain the oracle tries (<= 4)")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    tally = Counter()
    t0 = time.perf_counter()
    for k in range(args.n):
        tbox, abox = random_kb(rng)
        kb = KnowledgeBase(tuple(tbox), abox)
        tableau = is_consistent(kb)
        try:
            oracle = brute_force_consistent(kb, args.domain)
        except BudgetExceeded:
            oracle = brute_force_consistent(kb, 2)
            tally["oracle fell back to domain 2"] += 1
        if oracle is Verdict.SAT:
            tally["sat (model found)"] += 1
            if not tableau:
                tally["DISAGREEMENT"] += 1
                print(f"kb #{k}: oracle found a model, tableau says inconsistent\n  {tbox}\n  {abox}")
        elif tableau:
            tally["tableau sat, no small model"] += 1
        else:
            tally["both unsat up to the bound"] += 1
    for key, v in sorted(tally.items()):
        print(f"{key:32} {v}")
    print(f"{args.n} knowledge bases in {time.perf_counter() - t0:.1f}s")
    sys.exit(1 if tally["DISAGREEMENT"] else 0)


if __name__ == "__main__":
    main()
