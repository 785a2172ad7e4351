"""Regenerate golden_cumulants.csv from the mpmath brute-force oracle.

Run from the repository root: ``python3 tests/data/make_golden.py``.
Only finite superpositions are stored, so ``tail_bound`` is zero.
"""

import csv
import math
import sys
from pathlib import Path

here = Path(__file__).resolve().parent
sys.path.insert(0, str(here.parent))

from oracles import brute_cumulant_from_representation  # noqa: E402

CASES = [
    # (H, lambda, alpha, beta, m, n, k_max)
    (0.75, 1.0, 1.0, 1.0, 3, 4, 2),
    (0.75, 1.0, 1.0, 1.0, 2, 16, 8),
    (0.6, 0.5, 2.0, 0.5, 2, 10, 5),
    (0.9, 2.0, 1.5, 2.0, 3, 12, 6),
    (0.55, 1.0, 1.0, 1.0, 4, 8, 4),
    (0.8, 0.7, 0.5, 1.0, 4, 20, 10),
]


def main():
    out = here / "golden_cumulants.csv"
    with open(out, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("H", "lambda", "family", "m", "n", "exact_cumulant", "tail_bound", "k_max"))
        for h, lam, alpha, beta, m, n, k_max in CASES:
            c_m = math.factorial(m - 1) / beta**m
            val = brute_cumulant_from_representation(c_m, lam, h, alpha, k_max, m, n)
            w.writerow((repr(h), repr(lam), f"gamma:alpha={alpha!r};beta={beta!r}", m, n, repr(val), "0.0", k_max))
    print(out)


if __name__ == "__main__":
    main()
