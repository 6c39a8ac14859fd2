"""Formal class space of indecomposables with exact rational coefficients.

A ``ThetaVector`` is a finitely supported combination sum c_M [M] over the
labels of an ``IndecRegistry``.  Surjective numbers of class vectors are
evaluated through an oracle that realises labels as concrete modules (see
``surjlab.TestbedOracle``); an oracle needs ``module(counts)``,
``surj(counts, N)``, ``mu(N)`` and ``find_surjection(source, target)``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "IndecRegistry",
    "ThetaVector",
    "FrobeniusContext",
    "PositivityResult",
    "to_fraction",
    "floor_part",
    "support_data",
    "norm",
    "lattice",
    "surj_on_theta",
    "surj_sequence",
    "asn_on_theta",
    "s_from_fl",
    "positivity_check",
]


def to_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, "num/den" string or float literal."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("coefficients must be finite")
        # the shortest decimal that round-trips, so 1.7 means 17/10
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as a rational coefficient")


@dataclass(frozen=True)
class IndecRegistry:
    """Labels of indecomposables with their generator counts mu."""

    labels: tuple[str, ...]
    mu: dict = field(default_factory=dict)

    def __init__(self, labels, mu):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise ValueError("registry labels must be distinct")
        weights = {lab: int(mu[lab]) for lab in labels}
        if any(w < 1 for w in weights.values()):
            raise ValueError("every mu weight must be >= 1")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "mu", weights)

    def __hash__(self) -> int:
        return hash((self.labels, tuple(self.mu[x] for x in self.labels)))

    def __contains__(self, label) -> bool:
        return label in self.mu

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "mu": {k: self.mu[k] for k in self.labels}}

    @classmethod
    def from_dict(cls, data: dict) -> "IndecRegistry":
        return cls(data["labels"], data["mu"])


class ThetaVector:
    """sum_label c_label [label] with exact rational coefficients."""

    __slots__ = ("registry", "coeffs")

    def __init__(self, registry: IndecRegistry, coeffs=None):
        self.registry = registry
        clean = {}
        for label, c in (coeffs or {}).items():
            if label not in registry:
                raise KeyError(f"label {label!r} is not in the registry")
            c = to_fraction(c)
            if c != 0:
                clean[label] = c
        # registry order keeps serialisation and iteration deterministic
        self.coeffs = {lab: clean[lab] for lab in registry.labels if lab in clean}

    @classmethod
    def basis(cls, registry: IndecRegistry, label: str, c=1) -> "ThetaVector":
        return cls(registry, {label: c})

    @classmethod
    def zero(cls, registry: IndecRegistry) -> "ThetaVector":
        return cls(registry, {})

    def __getitem__(self, label: str) -> Fraction:
        if label not in self.registry:
            raise KeyError(label)
        return self.coeffs.get(label, Fraction(0))

    def _same(self, other: "ThetaVector") -> None:
        if not isinstance(other, ThetaVector):
            raise TypeError("expected a ThetaVector")
        if other.registry != self.registry:
            raise ValueError("class vectors live over different registries")

    def __add__(self, other: "ThetaVector") -> "ThetaVector":
        self._same(other)
        return ThetaVector(self.registry, {x: self[x] + other[x] for x in self.registry.labels})

    def __neg__(self) -> "ThetaVector":
        return ThetaVector(self.registry, {x: -c for x, c in self.coeffs.items()})

    def __sub__(self, other: "ThetaVector") -> "ThetaVector":
        return self + (-other)

    def __mul__(self, k) -> "ThetaVector":
        k = to_fraction(k)
        return ThetaVector(self.registry, {x: k * c for x, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ThetaVector)
            and other.registry == self.registry
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.registry, tuple(self.coeffs.items())))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}[{x}]" for x, c in self.coeffs.items())

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())

    def integer_counts(self) -> dict[str, int]:
        """Coefficients as ints; the vector must be integral and >= 0."""
        out = {}
        for x, c in self.coeffs.items():
            if c.denominator != 1 or c < 0:
                raise ValueError("not a nonnegative integral class vector")
            out[x] = int(c)
        return out

    def to_dict(self) -> dict:
        return {
            "registry": self.registry.to_dict(),
            "coeffs": {x: f"{c.numerator}/{c.denominator}" for x, c in self.coeffs.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ThetaVector":
        return cls(IndecRegistry.from_dict(data["registry"]), data["coeffs"])

    @classmethod
    def from_json(cls, text: str) -> "ThetaVector":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class FrobeniusContext:
    """Frobenius data of a ring: Krull dimension d and log_p [k : k^p]."""

    p: int
    d: int
    frak_d: int
    fl: ThetaVector

    def __post_init__(self):
        if not self.fl.is_nonnegative():
            raise ValueError("a Frobenius limit has nonnegative coefficients")

    @property
    def delta(self) -> int:
        return self.d + self.frak_d


def floor_part(alpha: ThetaVector) -> ThetaVector:
    """sum max(0, floor(c)) [M]."""
    return ThetaVector(
        alpha.registry,
        {x: max(0, math.floor(c)) for x, c in alpha.coeffs.items()},
    )


def support_data(alpha: ThetaVector) -> tuple[frozenset, int]:
    """Positively supported labels and nu, the mu of their direct sum."""
    supp = frozenset(x for x, c in alpha.coeffs.items() if c > 0)
    return supp, sum(alpha.registry.mu[x] for x in supp)


def norm(alpha: ThetaVector, weighted: bool = True) -> Fraction:
    """sum |c| mu(label); ``weighted=False`` drops the mu factors."""
    mu = alpha.registry.mu
    return sum(
        (abs(c) * (mu[x] if weighted else 1) for x, c in alpha.coeffs.items()),
        Fraction(0),
    )


def lattice(alpha: ThetaVector, beta: ThetaVector) -> tuple[ThetaVector, ThetaVector, bool]:
    """Componentwise (sup, inf, alpha <= beta)."""
    alpha._same(beta)
    labels = alpha.registry.labels
    sup = ThetaVector(alpha.registry, {x: max(alpha[x], beta[x]) for x in labels})
    inf = ThetaVector(alpha.registry, {x: min(alpha[x], beta[x]) for x in labels})
    leq = all(alpha[x] <= beta[x] for x in labels)
    return sup, inf, leq


def surj_on_theta(alpha: ThetaVector, N, oracle) -> int:
    """surj_N of the module realising the floor part of alpha."""
    return oracle.surj(floor_part(alpha).integer_counts(), N)


def surj_sequence(
    alpha: ThetaVector, N, oracle, t_max: int, executor: Executor | None = None
) -> list[Fraction]:
    """surj_N(t alpha) / t for t = 1 .. t_max (in order, whatever the executor)."""
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    ts = range(1, t_max + 1)

    def one(t):
        return Fraction(surj_on_theta(alpha * t, N, oracle), t)

    if executor is None:
        return [one(t) for t in ts]
    return list(executor.map(one, ts))


def asn_on_theta(
    alpha: ThetaVector, N, oracle, t_max: int = 8, executor: Executor | None = None
) -> tuple[Fraction, Fraction, Fraction]:
    """(estimate, lower, upper) for asn_N(alpha).

    t -> surj_N(t alpha) is superadditive, so asn is the supremum of
    surj_N(t alpha)/t; the running maximum is therefore both the estimate and
    a certified lower bound.  The upper bound is ||alpha|| / mu(N).
    """
    values = surj_sequence(alpha, N, oracle, t_max, executor)
    lower = max(values)
    upper = norm(alpha) / oracle.mu(N)
    if lower > upper:
        raise AssertionError(f"asn bracket inverted: {lower} > {upper}")
    return lower, lower, upper


def s_from_fl(ctx: FrobeniusContext, M, oracle, t_max: int = 8, executor=None):
    """Bracket on s(M) = asn_M(FL([M])) with the Frobenius limit as input."""
    return asn_on_theta(ctx.fl, M, oracle, t_max, executor)


@dataclass
class PositivityResult:
    positive: bool
    source_counts: dict[str, int]
    witness: np.ndarray | None
    exact: bool
    search_bound: int

    def __bool__(self) -> bool:
        return self.positive


def positivity_check(ctx: FrobeniusContext, M, oracle) -> PositivityResult:
    """Is there a surjection onto M from a module supported on supp FL?

    If some N with supp [N] in supp FL maps onto M, Nakayama picks at most
    mu(M) of its summands whose tops already cover the top of M, so it is
    enough to test Y^mu(M) with Y the sum of the support labels.
    """
    supp, _ = support_data(ctx.fl)
    bound = getattr(oracle, "exhaustion_bound", 0)
    if M.dim == 0:
        return PositivityResult(True, {}, np.zeros((0, 0), dtype=np.int64), True, bound)
    copies = oracle.mu(M)
    counts = {x: copies for x in ctx.fl.registry.labels if x in supp}
    if not counts:
        return PositivityResult(False, {}, None, True, bound)
    source = oracle.module(counts)
    witness, exact = oracle.find_surjection(source, M)
    return PositivityResult(witness is not None, counts, witness, exact, bound)
