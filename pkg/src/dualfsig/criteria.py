"""Positivity criteria and the classification of the vector-invariant family.

``evaluate_criteria`` runs three degreewise tests on B = Sym(P^r):

* cond2: the cover P_nu -> det_V stays onto after applying (B_d (x) -)^G;
* cond3: H^1(G, B_d (x) rad P_nu) = 0;
* cond4: no trivial summand of B_d contains det_V^{-1}.

They must agree in every degree; a disagreement raises ``TheoryFalsified``.
``classify`` combines them with the depth formula of Kemper and the
pseudo-reflection scan into one ``ClassificationRow``.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import Executor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .agl_group import has_transposition, is_pseudo_reflection, make_group
from .kg_modules import (
    TheoryFalsified,
    character,
    cover_map_surjective,
    decompose_degree,
    det_character,
    h1_table,
    socle,
    vector_rep,
)
from .surjlab import (
    TestbedOracle,
    direct_sum,
    mu,
    preset_algebra,
    split_surjection,
    surj_number,
)
from .theta_space import ThetaVector, asn_on_theta, lattice, norm, support_data, surj_on_theta

__all__ = [
    "CriterionReport",
    "ClassificationRow",
    "DegreeVerdict",
    "evaluate_criteria",
    "kemper_depth",
    "classify",
    "case_label",
    "default_degree_bound",
    "run_surjlab_suite",
    "DEFAULT_SUITE_CAPS",
]


def default_degree_bound(p: int) -> int:
    return 3 * p


def _map(executor: Executor | None, fn, items):
    items = list(items)
    if executor is None:
        return [fn(x) for x in items]
    return list(executor.map(fn, items))


@dataclass
class DegreeVerdict:
    d: int
    cover_surjective: bool
    h1_rad_pnu: int
    trivial: int
    det_inverse_in_trivial: bool

    @property
    def cond2(self) -> bool:
        return self.cover_surjective

    @property
    def cond3(self) -> bool:
        return self.h1_rad_pnu == 0

    @property
    def cond4(self) -> bool:
        return not (self.trivial > 0 and self.det_inverse_in_trivial)


@dataclass
class CriterionReport:
    p: int
    r: int
    D: int
    degrees: list[DegreeVerdict]
    det_v: str
    implied_all_degrees: bool
    s_positive: bool
    s_lower_bound: Fraction

    @property
    def cond2(self) -> list[bool]:
        return [v.cond2 for v in self.degrees]

    @property
    def cond3(self) -> list[bool]:
        return [v.cond3 for v in self.degrees]

    @property
    def cond4(self) -> list[bool]:
        return [v.cond4 for v in self.degrees]

    @property
    def first_failure(self) -> int | None:
        """First degree where the checks fail (they fail together)."""
        for v in self.degrees:
            if not v.cond2:
                return v.d
        return None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "r": self.r,
            "D": self.D,
            "det_v": self.det_v,
            "cond2": all(self.cond2),
            "cond3": all(self.cond3),
            "cond4": all(self.cond4),
            "first_failure_degree": self.first_failure,
            "s_positive": self.s_positive,
            "s_positive_all_degrees": self.implied_all_degrees,
            "s_lower_bound": _frac(self.s_lower_bound),
            "degrees": [
                {
                    "d": v.d,
                    "coverSurjective": v.cover_surjective,
                    "h1_radPnu": v.h1_rad_pnu,
                    "trivial": v.trivial,
                    "cond4": v.cond4,
                }
                for v in self.degrees
            ],
        }


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def evaluate_criteria(p: int, r: int, D: int | None = None, executor: Executor | None = None) -> CriterionReport:
    """Run the three degreewise tests for d = 0..D and cross-check them."""
    if r < 1:
        raise ValueError("r must be >= 1")
    D = default_degree_bound(p) if D is None else D
    if D < 0:
        raise ValueError("degree bound must be >= 0")
    G = make_group(p)
    det = det_character(G, r)
    k = character(G, 0)
    det_inv_in_k = any(c == det.inverse() for c, _ in socle(k))

    def one(d: int) -> DegreeVerdict:
        return DegreeVerdict(
            d,
            cover_map_surjective(p, r, d),
            h1_table(p, r, d, "radPnu"),
            decompose_degree(p, r, d, method="types").trivial,
            det_inv_in_k,
        )

    degrees = _map(executor, one, range(D + 1))
    for v in degrees:
        if not (v.cond2 == v.cond3 == v.cond4):
            raise TheoryFalsified(
                f"criteria disagree at p={p} r={r} d={v.d}: "
                f"cover={v.cond2} h1={v.cond3} det={v.cond4}",
                v.d,
            )
    computed = all(v.cond2 for v in degrees)
    # every non-projective summand of B is trivial, so only det_V matters
    implied = not det_inv_in_k
    if computed != implied:
        raise TheoryFalsified(
            f"degree-bounded verdict {computed} contradicts the all-degree verdict {implied}"
        )
    lower = Fraction(1, G.order) if computed else Fraction(0)
    return CriterionReport(p, r, D, degrees, det.label, implied, computed, lower)


def kemper_depth(p: int, r: int) -> tuple[int, int, bool]:
    """(depth, dim, Cohen-Macaulay) from Kemper's formula min(rp, 2(p-1) + r)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    dim = r * p
    depth = min(r * p, 2 * (p - 1) + r)
    return depth, dim, depth == dim


def case_label(p: int, r: int) -> str:
    if p == 3 and r == 1:
        return "polynomial"
    if r == 1:
        return "3"
    if r == 2:
        return "4"
    return "5" if r % 2 else "6"


@dataclass
class ClassificationRow:
    p: int
    r: int
    group_order: int
    has_transposition: bool
    has_pseudo_reflection: bool
    det_v: str
    s_positive: bool
    s_lower_bound: Fraction
    first_failure_degree: int | None
    degree_bound: int
    depth: int
    dim: int
    cohen_macaulay: bool
    weakly_f_regular: bool
    f_rational: bool
    gorenstein_flag: bool
    quasi_gorenstein_flag: bool
    case_label: str
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["s_lower_bound"] = _frac(self.s_lower_bound)
        return out


CSV_FIELDS = [
    "p", "r", "group_order", "has_pseudo_reflection", "det_v", "s_positive",
    "s_lower_bound", "first_failure_degree", "degree_bound", "depth", "dim",
    "cohen_macaulay", "weakly_f_regular", "f_rational", "gorenstein_flag",
    "quasi_gorenstein_flag", "case_label",
]


def classify(p: int, r: int, D: int | None = None, executor: Executor | None = None) -> ClassificationRow:
    if p == 2:
        raise ValueError("p = 2 is outside the family (Gamma is trivial); see example-p2")
    G = make_group(p)
    V = vector_rep(G, r)
    pseudo = any(is_pseudo_reflection(g, V) for g in G.elements if g != G.identity)
    report = evaluate_criteria(p, r, D, executor)
    depth, dim, cm = kemper_depth(p, r)
    polynomial = pseudo and G.order == 6
    # p divides |G| always; without pseudo-reflections A is not weakly F-regular
    weakly = polynomial
    f_rational = polynomial or (cm and report.s_positive)
    det_trivial = report.det_v == "trivial"
    return ClassificationRow(
        p=p,
        r=r,
        group_order=G.order,
        has_transposition=has_transposition(G),
        has_pseudo_reflection=pseudo,
        det_v=report.det_v,
        s_positive=report.s_positive,
        s_lower_bound=report.s_lower_bound,
        first_failure_degree=report.first_failure,
        degree_bound=report.D,
        depth=depth,
        dim=dim,
        cohen_macaulay=cm,
        weakly_f_regular=weakly,
        f_rational=f_rational,
        gorenstein_flag=polynomial or (det_trivial and cm),
        quasi_gorenstein_flag=det_trivial and not cm,
        case_label=case_label(p, r),
        provenance={
            "s_positive": f"computed for d <= {report.D}; all degrees via orbit dichotomy and det_V",
            "depth": "Kemper formula (not recomputed)",
            "cohen_macaulay": "Kemper formula (not recomputed)",
            "f_rational": "Cohen-Macaulay and s_positive (Sannai)",
            "weakly_f_regular": "pseudo-reflection scan and p | |G|",
        },
    )


# ---------------------------------------------------------------------------
# surjective-number lemma suite

DEFAULT_SUITE_CAPS = {
    "f2_max_dim": 3,
    "f2_max_r": 3,
    "f3_samples": 1000,
    "f3_max_summands": 2,
    "t_max": 3,
}


class _Tally:
    def __init__(self):
        self.counts: dict[str, list[int]] = {}
        self.failures: list[dict] = []

    def check(self, name: str, ok: bool, **ctx) -> None:
        c = self.counts.setdefault(name, [0, 0])
        c[0] += 1
        if not ok:
            c[1] += 1
            if len(self.failures) < 20:
                self.failures.append({"check": name, **ctx})

    def merge(self, other: "_Tally") -> None:
        for k, (n, bad) in other.counts.items():
            c = self.counts.setdefault(k, [0, 0])
            c[0] += n
            c[1] += bad
        room = 20 - len(self.failures)
        self.failures.extend(other.failures[:max(room, 0)])


def _counts_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _counts_scale(a: dict, r: int) -> dict:
    return {k: v * r for k, v in a.items() if v * r}


def _counts_name(a: dict) -> str:
    return "+".join(f"{v}{k}" if v > 1 else k for k, v in sorted(a.items())) or "0"


def _module_checks(T: _Tally, O: TestbedOracle, cM: dict, cMp: dict, nN: str, r_max: int) -> None:
    """Module-level inequalities for surj and nsurj, plus split_surjection."""
    N = O.labels[nN]
    ctx = {"M": _counts_name(cM), "M'": _counts_name(cMp), "N": nN}
    sM, sMp = O.surj(cM, N), O.surj(cMp, N)
    both = _counts_add(cM, cMp)
    sBoth = O.surj(both, N)
    muN = mu(N)
    muM, muMp = mu(O.module(cM)), mu(O.module(cMp))
    T.check("surj mu bound", sM * muN <= muM, **ctx)
    T.check("surj superadditive", sM + sMp <= sBoth, **ctx)
    T.check("surj summand lower", sMp <= sBoth - sM, **ctx)
    T.check("surj summand upper", sBoth - sM <= muMp, **ctx)
    nsurj = {}
    for r in range(1, r_max + 1):
        sr = O.surj(_counts_scale(cM, r), N)
        T.check("surj powers", r * sM <= sr, r=r, **ctx)
        nsurj[r] = Fraction(sr, r)
        T.check("nsurj above surj", nsurj[r] >= sM, r=r, **ctx)
        T.check("nsurj mu bound", nsurj[r] * muN <= muM, r=r, **ctx)
    for r, kr in itertools.product(nsurj, repeat=2):
        if kr % r == 0:
            T.check("nsurj multiples", nsurj[kr] >= nsurj[r], r=r, kr=kr, **ctx)
    # split a surjection M + M' -> N^m down to M
    if sBoth >= 1:
        M, Mp = O.module(cM), O.module(cMp)
        n, cert = surj_number(direct_sum(M, Mp), N, O.exhaustion_bound, O.seed)
        res = split_surjection(M, Mp, N, cert.witness, n)
        F = M.field
        kept = n - len(res.dropped)
        ok = (
            len(res.dropped) <= muMp
            and res.map.shape == (kept * N.dim, M.dim)
            and (kept == 0 or F.rank(res.map) == kept * N.dim)
            and kept <= sM
        )
        T.check("split_surjection", ok, **ctx)


def _theta_checks(T: _Tally, O: TestbedOracle, a: ThetaVector, b: ThetaVector, nN: str, t_max: int) -> None:
    """Class-vector inequalities for surj and the asn bracket."""
    N = O.labels[nN]
    ctx = {"alpha": repr(a), "beta": repr(b), "N": nN}
    sa, sb = surj_on_theta(a, N, O), surj_on_theta(b, N, O)
    _, inf, _ = lattice(a, b)
    _, nu_inf = support_data(inf)
    T.check("theta surj Lipschitz", abs(sa - sb) <= norm(a - b) + nu_inf, **ctx)
    ap, bp = lattice(a, a.zero(a.registry))[0], lattice(b, b.zero(b.registry))[0]
    sap, sbp = surj_on_theta(ap, N, O), surj_on_theta(bp, N, O)
    T.check("theta surj superadditive", 0 <= sap <= surj_on_theta(ap + bp, N, O) - sbp, **ctx)

    est_a, lo_a, up_a = asn_on_theta(a, N, O, t_max)
    est_b, lo_b, up_b = asn_on_theta(b, N, O, t_max)
    T.check("asn bracket", sa <= lo_a <= est_a <= up_a, **ctx)
    # k alpha at matching effective t: the bracket of asn(2a) meets 2 * bracket(a)
    _, lo_2a, up_2a = asn_on_theta(a * 2, N, O, max(1, t_max // 2))
    T.check("asn homogeneous", lo_2a <= 2 * up_a and 2 * lo_a <= up_2a, **ctx)
    _, lo_ab, up_ab = asn_on_theta(ap + bp, N, O, t_max)
    _, lo_ap, _ = asn_on_theta(ap, N, O, t_max)
    _, lo_bp, _ = asn_on_theta(bp, N, O, t_max)
    T.check("asn superadditive", lo_ap + lo_bp <= up_ab, **ctx)
    dist = norm(a - b)
    T.check("asn Lipschitz", lo_a <= up_b + dist and lo_b <= up_a + dist, **ctx)


def _f2_instances(O: TestbedOracle, max_dim: int):
    """All modules of dimension <= max_dim over F_2[x]/(x^2), as label counts."""
    dims = {k: O.labels[k].dim for k in O.labels}
    out = []
    for nR in range(max_dim // dims["R"] + 1):
        for nk in range(max_dim + 1):
            if nR * dims["R"] + nk * dims["k"] <= max_dim:
                out.append({k: v for k, v in (("R", nR), ("k", nk)) if v})
    return out


def _random_counts(rng: random.Random, labels: list[str], max_summands: int) -> dict:
    out: dict = {}
    for _ in range(rng.randint(0, max_summands)):
        lab = rng.choice(labels)
        out[lab] = out.get(lab, 0) + 1
    return out


def _random_theta(rng: random.Random, registry, max_labels: int = 2) -> ThetaVector:
    coeffs = {}
    for lab in rng.sample(list(registry.labels), rng.randint(0, max_labels)):
        coeffs[lab] = Fraction(rng.randint(-3, 7), rng.choice([1, 2, 3]))
    return ThetaVector(registry, coeffs)


def run_surjlab_suite(seed: int = 0, caps: dict | None = None, executor: Executor | None = None) -> dict:
    """Exhaustive and sampled runs of the surjective-number lemmas.

    ``caps`` keys: ``f2_max_dim`` (exhaustive F_2[x]/(x^2) run), ``f2_max_r``,
    ``f3_samples`` (random F_3[x,y]/(x,y)^2 instances), ``f3_max_summands``,
    ``t_max``.  Missing keys switch that part off; ``None`` means the defaults.
    """
    caps = dict(DEFAULT_SUITE_CAPS) if caps is None else dict(caps)
    T = _Tally()
    report: dict = {"seed": seed, "caps": dict(sorted(caps.items()))}
    t_max = int(caps.get("t_max", 2))

    if caps.get("f2_max_dim") is not None:
        O = TestbedOracle(preset_algebra("F2[x]/(x^2)"), seed=seed)
        mods = _f2_instances(O, int(caps["f2_max_dim"]))
        r_max = int(caps.get("f2_max_r", 2))
        triples = [(a, b, n) for a in mods for b in mods for n in O.labels]
        for a, b, n in triples:
            _module_checks(T, O, a, b, n, r_max)
        reg = O.registry()
        thetas = [ThetaVector(reg, {"R": x, "k": y}) for x in (0, Fraction(1, 2), 1, 2) for y in (0, Fraction(3, 2), -1, 2)]
        for a, b in itertools.product(thetas, repeat=2):
            for n in O.labels:
                _theta_checks(T, O, a, b, n, t_max)
        report["f2_modules"] = len(mods)
        report["f2_instances"] = len(triples) + len(thetas) ** 2 * len(O.labels)
        report["f2_inexact"] = O.inexact

    if caps.get("f3_samples"):
        O = TestbedOracle(preset_algebra("F3[x,y]/(x,y)^2"), seed=seed)
        labels = list(O.labels)
        reg = O.registry()
        ms = int(caps.get("f3_max_summands", 2))

        def one(i: int) -> _Tally:
            rng = random.Random(f"{seed}:{i}")
            local = _Tally()
            cM, cMp = _random_counts(rng, labels, ms), _random_counts(rng, labels, ms)
            nN = rng.choice(labels)
            _module_checks(local, O, cM, cMp, nN, 2)
            a, b = _random_theta(rng, reg), _random_theta(rng, reg)
            _theta_checks(local, O, a, b, nN, t_max)
            return local

        for part in _map(executor, one, range(int(caps["f3_samples"]))):
            T.merge(part)
        report["f3_instances"] = int(caps["f3_samples"])
        report["f3_inexact"] = O.inexact

    report["checks"] = {k: {"instances": n, "violations": bad} for k, (n, bad) in sorted(T.counts.items())}
    report["violations"] = sum(bad for _, bad in T.counts.values())
    report["failures"] = T.failures
    return report
