"""Surjective numbers on a small local algebra.

Computes surj_N(M) with certificates, the asymptotic bracket for a class
vector, and the positivity test against a hypothetical Frobenius limit.
"""

from __future__ import annotations

import argparse
from fractions import Fraction

from dualfsig.surjlab import PRESET_ALGEBRAS, TestbedOracle, parse_module, preset_algebra, surj_number
from dualfsig.theta_space import FrobeniusContext, ThetaVector, asn_on_theta, positivity_check


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algebra", choices=sorted(PRESET_ALGEBRAS), default="F3[x,y]/(x,y)^2")
    args = ap.parse_args()
    A = preset_algebra(args.algebra)
    O = TestbedOracle(A)
    print(f"algebra {A.name}; indecomposables: {', '.join(O.labels)}")

    for src, tgt in [("R+k", "k"), ("2R", "R"), ("R+E", "k")] + ([("E", "R"), ("2E", "k")] if "E" in O.labels else []):
        n, cert = surj_number(parse_module(A, src), parse_module(A, tgt))
        print(f"  surj_{tgt}({src}) = {n}  exact={cert.exact} refuted_by={cert.refuted_by}")

    reg = O.registry()
    alpha = ThetaVector(reg, {"R": Fraction(1, 2), "k": Fraction(3, 2)})
    est, lo, hi = asn_on_theta(alpha, O.labels["k"], O, t_max=6)
    print(f"  asn_k({alpha}) in [{lo}, {hi}]")

    fl = ThetaVector(reg, {"k": Fraction(1, 3)})
    ctx = FrobeniusContext(A.p, 2, 0, fl)
    for label, M in O.labels.items():
        res = positivity_check(ctx, M, O)
        print(f"  FL = {fl}: something in supp FL maps onto {label}? {res.positive}")


if __name__ == "__main__":
    main()
