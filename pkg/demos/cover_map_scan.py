"""Walk the degrees of B for one (p, r) and show where the cover map stops being onto.

For even r the determinant of V is trivial, the trivial summands of B supply
invariants of det, and each such degree shows up three ways at once: the
cover map fails, H^1 with rad P coefficients is nonzero, and a_d > 0.
"""

from __future__ import annotations

import argparse

from dualfsig.criteria import evaluate_criteria
from dualfsig.kg_modules import decompose_degree


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--max-degree", type=int, default=15)
    args = ap.parse_args()

    rep = evaluate_criteria(args.p, args.r, args.max_degree)
    print(f"p={args.p} r={args.r} det_V={rep.det_v}")
    print(f"{'d':>3} {'dim B_d':>9} {'a_d':>4} {'sum m_dj':>9} {'onto':>5} {'h1':>3}")
    for v in rep.degrees:
        dec = decompose_degree(args.p, args.r, v.d, method="types")
        print(f"{v.d:>3} {dec.dim_bd:>9} {dec.trivial:>4} {sum(dec.proj.values()):>9} "
              f"{str(v.cover_surjective):>5} {v.h1_rad_pnu:>3}")
    if rep.s_positive:
        print(f"positive dual F-signature, s >= {rep.s_lower_bound}")
    else:
        print(f"s = 0; first failing degree {rep.first_failure}")


if __name__ == "__main__":
    main()
