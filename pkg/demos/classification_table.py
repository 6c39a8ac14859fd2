"""Print the classification table for small p and r.

    python demos/classification_table.py --p 3 5 7 --r 1 2 3 4 --max-degree 12
"""

from __future__ import annotations

import argparse

from dualfsig.cli import render_rows
from dualfsig.criteria import classify

FIELDS = ["p", "r", "det_v", "s_positive", "s_lower_bound", "first_failure_degree",
          "depth", "dim", "cohen_macaulay", "f_rational", "gorenstein_flag",
          "quasi_gorenstein_flag", "case_label"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--r", type=int, nargs="+", default=[1, 2, 3, 4])
    ap.add_argument("--max-degree", type=int, default=12)
    args = ap.parse_args()
    rows = [classify(p, r, args.max_degree).to_dict() for p in args.p for r in args.r]
    print(render_rows(rows, FIELDS, "table"), end="")


if __name__ == "__main__":
    main()
