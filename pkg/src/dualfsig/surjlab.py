"""Surjective numbers over small commutative local F_p-algebras.

A ``LocalAlgebra`` is given by structure constants on a basis e_0 = 1,
e_1, ... with the e_i (i >= 1) spanning the maximal ideal.  Modules are
``FdModule`` objects carrying one action matrix per basis element.

``surj_number`` decides, for modules M and N != 0, the largest n with a
surjection M -> N^n.  By Nakayama a map into N^n is onto iff it is onto modulo
m, so the search runs over the image S of Hom_R(M, N) in
Hom_k(M/mM, N/mN): we need n elements of S whose stacked matrix has full row
rank.  Witnesses are lifted back to genuine module maps and re-verified.
"""

from __future__ import annotations

import itertools
import math
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gfp_linalg import PrimeField

__all__ = [
    "LocalAlgebra",
    "FdModule",
    "SurjCertificate",
    "SplitResult",
    "monomial_algebra",
    "preset_algebra",
    "PRESET_ALGEBRAS",
    "regular",
    "residue_field",
    "zero_module",
    "dual_module",
    "cyclic_quotient",
    "direct_sum",
    "power",
    "indecomposables",
    "parse_module",
    "mu",
    "top_data",
    "hom_space",
    "is_module_map",
    "surj_number",
    "brute_force_surj",
    "nsurj",
    "asn_estimate",
    "greedy_cover",
    "split_surjection",
    "TestbedOracle",
]

DEFAULT_EXHAUSTION_BOUND = 2**20


class LocalAlgebra:
    """Finite-dimensional commutative local algebra with residue field F_p."""

    def __init__(self, p: int, struct, name: str = ""):
        self.field = PrimeField(p)
        F = self.field
        c = np.mod(np.asarray(struct, dtype=np.int64), p)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise ValueError("structure constants must be an n x n x n array")
        self.struct = c
        self.dim = c.shape[0]
        self.name = name
        n = self.dim
        # left multiplication matrices: L_i[k, j] = c[i, j, k]
        self.mult = [c[i].T.copy() for i in range(n)]
        if not np.array_equal(self.mult[0], F.identity(n)):
            raise ValueError("e_0 is not a unit")
        for i, j in itertools.product(range(n), repeat=2):
            if not np.array_equal(c[i, j], c[j, i]):
                raise ValueError("algebra is not commutative")
        for i, j in itertools.product(range(n), repeat=2):
            # (e_i e_j) e_k == e_i (e_j e_k) for all k, via L_{e_i e_j} = L_i L_j
            lhs = np.mod(np.tensordot(c[i, j], np.asarray(self.mult), axes=1), p)
            if not np.array_equal(lhs, F.matmul(self.mult[i], self.mult[j])):
                raise ValueError("algebra is not associative")
        for i in range(1, n):
            if np.any(F.matpow(self.mult[i], n)):
                raise ValueError(f"e_{i} is not nilpotent")

    @property
    def p(self) -> int:
        return self.field.p

    def __repr__(self) -> str:
        return f"LocalAlgebra({self.name or self.dim})"


def monomial_algebra(p: int, nvars: int, keep, name: str = "") -> LocalAlgebra:
    """k[x_1..x_n] / (monomials outside ``keep``), ``keep`` a set of exponent tuples."""
    basis = sorted(keep, key=lambda e: (sum(e), tuple(-x for x in e)))
    if basis[0] != (0,) * nvars:
        raise ValueError("the constant monomial must be kept")
    idx = {e: i for i, e in enumerate(basis)}
    n = len(basis)
    c = np.zeros((n, n, n), dtype=np.int64)
    for a, b in itertools.product(basis, repeat=2):
        prod = tuple(x + y for x, y in zip(a, b))
        if prod in idx:
            c[idx[a], idx[b], idx[prod]] = 1
    return LocalAlgebra(p, c, name)


def _truncated(p, nvars, total=None, each=None, name=""):
    keep = [
        e
        for e in itertools.product(range((each or total or 1) + 1), repeat=nvars)
        if (total is None or sum(e) < total) and (each is None or max(e) < each)
    ]
    return monomial_algebra(p, nvars, keep, name)


PRESET_ALGEBRAS = {
    "F2[x]/(x^2)": lambda: _truncated(2, 1, each=2, name="F2[x]/(x^2)"),
    "F3[x]/(x^3)": lambda: _truncated(3, 1, each=3, name="F3[x]/(x^3)"),
    "F2[x,y]/(x,y)^2": lambda: _truncated(2, 2, total=2, name="F2[x,y]/(x,y)^2"),
    "F3[x,y]/(x,y)^2": lambda: _truncated(3, 2, total=2, name="F3[x,y]/(x,y)^2"),
}

_ALGEBRA_CACHE: dict[str, LocalAlgebra] = {}


def preset_algebra(name: str) -> LocalAlgebra:
    if name not in PRESET_ALGEBRAS:
        raise KeyError(f"unknown algebra {name!r}; choose from {sorted(PRESET_ALGEBRAS)}")
    if name not in _ALGEBRA_CACHE:
        _ALGEBRA_CACHE[name] = PRESET_ALGEBRAS[name]()
    return _ALGEBRA_CACHE[name]


# ---------------------------------------------------------------------------
# modules


class FdModule:
    """A finite-dimensional module: one action matrix per algebra basis element."""

    def __init__(self, algebra: LocalAlgebra, action, name: str = "", check: bool = True):
        self.algebra = algebra
        F = algebra.field
        self.action = [F.mat(a) for a in action]
        if len(self.action) != algebra.dim:
            raise ValueError("need one action matrix per basis element")
        self.dim = self.action[0].shape[0] if self.action else 0
        self.name = name
        if check:
            self._check()

    def _check(self) -> None:
        A, F = self.algebra, self.algebra.field
        n = self.dim
        if not np.array_equal(self.action[0], F.identity(n)):
            raise ValueError("1 does not act as the identity")
        acts = np.asarray(self.action)
        for i, j in itertools.product(range(A.dim), repeat=2):
            lhs = F.matmul(self.action[i], self.action[j])
            rhs = np.mod(np.tensordot(A.struct[i, j], acts, axes=1), A.p)
            if not np.array_equal(lhs, rhs):
                raise ValueError("action does not respect the structure constants")

    @property
    def field(self) -> PrimeField:
        return self.algebra.field

    def __repr__(self) -> str:
        return f"FdModule({self.name or '?'}, dim={self.dim})"

    def __add__(self, other: "FdModule") -> "FdModule":
        return direct_sum(self, other)


def regular(A: LocalAlgebra) -> FdModule:
    return FdModule(A, A.mult, "R")


def residue_field(A: LocalAlgebra) -> FdModule:
    action = [[[1]]] + [[[0]]] * (A.dim - 1)
    return FdModule(A, action, "k")


def zero_module(A: LocalAlgebra) -> FdModule:
    return FdModule(A, [np.zeros((0, 0), dtype=np.int64)] * A.dim, "0", check=False)


def dual_module(M: FdModule) -> FdModule:
    """Hom_k(M, k) with (a f)(m) = f(a m); commutativity makes this a module."""
    return FdModule(M.algebra, [a.T.copy() for a in M.action], f"{M.name}*")


def cyclic_quotient(A: LocalAlgebra, ideal_gens: list[int], name: str = "") -> FdModule:
    """R / (e_i : i in ideal_gens)."""
    F = A.field
    R = regular(A)
    vecs = []
    for i in ideal_gens:
        for a in A.mult:
            vecs.append(F.matmul(a, A.mult[i])[:, 0])
    sub = np.array(vecs) if vecs else np.zeros((0, A.dim), dtype=np.int64)
    reps, proj = F.quotient_basis(A.dim, sub)
    return FdModule(A, [F.matmul(proj, a, reps) for a in R.action], name)


def direct_sum(*mods: FdModule) -> FdModule:
    mods = [m for m in mods]
    A = mods[0].algebra
    n = sum(m.dim for m in mods)
    action = []
    for i in range(A.dim):
        a = np.zeros((n, n), dtype=np.int64)
        off = 0
        for m in mods:
            a[off:off + m.dim, off:off + m.dim] = m.action[i]
            off += m.dim
        action.append(a)
    name = "+".join(m.name for m in mods if m.dim) or "0"
    return FdModule(A, action, name, check=False)


def power(M: FdModule, n: int) -> FdModule:
    if n == 0:
        return zero_module(M.algebra)
    out = direct_sum(*([M] * n))
    out.name = f"{n}{M.name}" if n > 1 else M.name
    return out


def indecomposables(A: LocalAlgebra) -> dict[str, FdModule]:
    """Named indecomposable modules shipped with each preset."""
    out = {"R": regular(A), "k": residue_field(A)}
    name = A.name
    if name == "F3[x]/(x^3)":
        out["R/(x^2)"] = cyclic_quotient(A, [2], "R/(x^2)")
    elif name in ("F2[x,y]/(x,y)^2", "F3[x,y]/(x,y)^2"):
        out["E"] = dual_module(out["R"])
        out["E"].name = "E"
        out["R/(x)"] = cyclic_quotient(A, [1], "R/(x)")
        out["R/(y)"] = cyclic_quotient(A, [2], "R/(y)")
    return out


_TERM = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?([A-Za-z][^+^]*?)\s*(?:\^\s*(\d+))?\s*$")


def parse_module(A: LocalAlgebra, text: str) -> FdModule:
    """Parse sums such as ``"R+k"``, ``"2R+k"`` or ``"R^2+E"``."""
    named = indecomposables(A)
    parts = []
    if text.strip() in ("0", ""):
        return zero_module(A)
    for term in text.split("+"):
        m = _TERM.match(term)
        if not m or m.group(2).strip() not in named:
            raise ValueError(f"cannot parse module term {term!r}; known: {sorted(named)}")
        mult = int(m.group(1) or 1) * int(m.group(3) or 1)
        parts.extend([named[m.group(2).strip()]] * mult)
    out = direct_sum(*parts)
    out.name = text
    return out


# ---------------------------------------------------------------------------
# linear algebra on modules


def _radical_image(M: FdModule) -> np.ndarray:
    """Spanning columns of mM."""
    F = M.field
    if M.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    cols = [a for a in M.action[1:]]
    if not cols:
        return np.zeros((M.dim, 0), dtype=np.int64)
    return F.column_space(np.hstack(cols))


def mu(M: FdModule) -> int:
    """Minimal number of generators, dim M / mM."""
    if M.dim == 0:
        return 0
    return M.dim - _radical_image(M).shape[1]


def top_data(M: FdModule) -> tuple[np.ndarray, np.ndarray]:
    """``(reps, proj)`` for the quotient M -> M/mM."""
    F = M.field
    return F.quotient_basis(M.dim, _radical_image(M).T)


def hom_space(M: FdModule, N: FdModule) -> list[np.ndarray]:
    """Basis of Hom_R(M, N) as ``dim N x dim M`` matrices."""
    if M.algebra is not N.algebra:
        raise ValueError("modules over different algebras")
    F = M.field
    if M.dim == 0 or N.dim == 0:
        return []
    eqs = []
    for a, b in zip(M.action[1:], N.action[1:]):
        eqs.append(np.kron(F.identity(N.dim), a.T) - np.kron(b, F.identity(M.dim)))
    if not eqs:
        kernel = F.identity(M.dim * N.dim)
    else:
        kernel = F.kernel_basis(np.mod(np.vstack(eqs), F.p))
    return [v.reshape(N.dim, M.dim) for v in kernel]


def is_module_map(M: FdModule, N: FdModule, phi: np.ndarray) -> bool:
    F = M.field
    return all(
        np.array_equal(F.matmul(phi, a), F.matmul(b, phi)) for a, b in zip(M.action, N.action)
    )


@dataclass
class SurjCertificate:
    """Evidence for ``surj_N(M) == n``.

    ``witness`` is a verified surjection M -> N^n (``None`` when n == 0).
    ``refuted_by`` says why n + 1 is impossible: ``"mu-bound"`` (top
    dimension count), ``"exhaustive"`` (complete search) or ``None`` when the
    search budget ran out, in which case ``exact`` is False and n is only a
    lower bound.
    """

    n: int
    witness: np.ndarray | None
    exact: bool
    refuted_by: str | None
    search_bound: int


def _full_rank_elements(F: PrimeField, basis: np.ndarray, rows: int):
    """Elements of span(basis) (basis: k x rows x cols) with full row rank.

    Returns ``(coeffs, rref_forms)``.
    """
    k = basis.shape[0]
    p = F.p
    coeffs = np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64)
    elems = np.mod(np.tensordot(coeffs, basis, axes=1), p)
    red, ranks = F.batch_rref(elems)
    keep = ranks == rows
    return coeffs[keep], red[keep]


def _subspaces(F: PrimeField, dim: int, limit: int = 4096):
    """Bases (as rref rows) of all nonzero subspaces of F^dim, or None if too many."""
    if F.p ** dim > limit:
        return None
    vecs = [np.array(v, dtype=np.int64) for v in itertools.product(range(F.p), repeat=dim) if any(v)]
    seen = {}
    frontier = []
    for v in vecs:
        b = F.row_basis(v[None, :])
        seen.setdefault(b.tobytes(), b)
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for b in frontier:
            for v in vecs:
                nb = F.row_basis(np.vstack([b, v]))
                if nb.shape[0] > b.shape[0] and nb.tobytes() not in seen:
                    seen[nb.tobytes()] = nb
                    nxt.append(nb)
        frontier = nxt
    return list(seen.values())


def _subspace_bound(F: PrimeField, S: np.ndarray, mu_n: int) -> int:
    """min over subspaces U of (top N)^* of dim(U o S) // dim U.

    Stacking n maps from S onto N^n forces the n dim U functionals u o s_i
    to be independent inside U o S, so this bounds surj from above.  With
    U = everything it is the row-span bound.
    """
    mu_m = S.shape[2]
    subs = _subspaces(F, mu_n)
    if subs is None:
        subs = [F.identity(mu_n)]
    best = mu_m
    for U in subs:
        rows = np.mod(np.einsum("ua,sab->sub", U, S), F.p).reshape(-1, mu_m)
        best = min(best, F.rank(rows) // U.shape[0])
    return best


def surj_number(
    M: FdModule,
    N: FdModule,
    exhaustion_bound: int = DEFAULT_EXHAUSTION_BOUND,
    seed: int = 0,
    samples: int = 64,
) -> tuple[int, SurjCertificate]:
    """Largest n admitting an R-linear surjection M -> N^n."""
    if N.dim == 0:
        raise ValueError("surj_N(M) needs N != 0")
    F = M.field
    mu_m, mu_n = mu(M), mu(N)
    if M.dim == 0:
        return 0, SurjCertificate(0, None, True, "mu-bound", 0)
    hom = hom_space(M, N)
    reps_m, _ = top_data(M)
    _, proj_n = top_data(N)
    if not hom:
        return 0, SurjCertificate(0, None, True, "exhaustive", 0)
    images = np.array([F.matmul(proj_n, h, reps_m) for h in hom])  # h x muN x muM
    # pick hom basis elements whose top images are independent
    flat = images.reshape(len(hom), -1)
    _, rk, piv = F.rref(flat.T)
    chosen = piv  # columns of flat.T = rows of flat
    S = images[chosen]
    H = [hom[i] for i in chosen]
    dim_s = len(chosen)
    if dim_s == 0:
        return 0, SurjCertificate(0, None, True, "exhaustive", 0)
    upper = min(mu_m // mu_n, _subspace_bound(F, S, mu_n))

    def lift(coeff_rows) -> np.ndarray:
        blocks = []
        for c in coeff_rows:
            blocks.append(np.mod(np.tensordot(np.asarray(c, dtype=np.int64), np.asarray(H), axes=1), F.p))
        return np.vstack(blocks)

    cand = None
    exhaustive_ok = F.p ** dim_s <= exhaustion_bound
    exact = True
    refuted = "mu-bound" if upper == mu_m // mu_n else "rank-bound"
    for n in range(upper, 0, -1):
        rng = np.random.default_rng([seed, n])
        found = None
        for _ in range(samples):
            c = rng.integers(0, F.p, size=(n, dim_s))
            stacked = np.mod(np.tensordot(c, S, axes=1), F.p).reshape(n * mu_n, mu_m)
            if F.rank(stacked) == n * mu_n:
                found = c
                break
        complete = False
        if found is None and exhaustive_ok:
            if cand is None:
                cand = _distinct_rowspaces(F, S, mu_n)
            res = _dfs(F, cand, n, mu_n, budget=exhaustion_bound)
            complete = res is not False
            found = res if complete else None
        if found is not None:
            phi = lift(found)
            if F.rank(phi) != n * N.dim or not is_module_map(M, power(N, n), phi):
                raise AssertionError("lifted witness failed verification")
            return n, SurjCertificate(n, phi, exact, refuted, exhaustion_bound)
        if complete and exact:
            refuted = "exhaustive"
        else:
            exact, refuted = False, None
    return 0, SurjCertificate(0, None, exact, refuted, exhaustion_bound)


def _distinct_rowspaces(F: PrimeField, S: np.ndarray, rows: int):
    """Full-rank elements of span(S), one per row space: (coeffs, rref rows)."""
    coeffs, red = _full_rank_elements(F, S, rows)
    if len(red) == 0:
        return []
    _, first = np.unique(red.reshape(len(red), -1), axis=0, return_index=True)
    first.sort()
    return [(coeffs[i], red[i]) for i in first]


def _dfs(F: PrimeField, cand, n: int, rows: int, budget: int):
    """Find n candidates whose row spaces form a direct sum.

    Returns the coefficient rows, ``None`` if none exist, ``False`` if the
    node budget was exhausted first.
    """
    nodes = 0

    def rec(start, chosen, basis):
        nonlocal nodes
        if len(chosen) == n:
            return list(chosen)
        for i in range(start, len(cand)):
            if len(cand) - i < n - len(chosen):
                break
            nodes += 1
            if nodes > budget:
                raise _Budget
            c, rs = cand[i]
            nb = np.vstack([basis, rs]) if basis.size else rs
            if F.rank(nb) == (basis.shape[0] if basis.size else 0) + rows:
                res = rec(i + 1, chosen + [c], F.row_basis(nb))
                if res is not None:
                    return res
        return None

    try:
        return rec(0, [], np.zeros((0, 0), dtype=np.int64))
    except _Budget:
        return False


class _Budget(Exception):
    pass


def brute_force_surj(M: FdModule, N: FdModule) -> int:
    """Oracle: enumerate every point of Hom(M, N^n) and test surjectivity."""
    F = M.field
    hom = hom_space(M, N)
    best = 0
    n = 1
    while n * N.dim <= M.dim and hom:
        found = False
        for coeffs in itertools.product(range(F.p), repeat=n * len(hom)):
            c = np.array(coeffs, dtype=np.int64).reshape(n, len(hom))
            phi = np.vstack([np.mod(np.tensordot(row, np.asarray(hom), axes=1), F.p) for row in c])
            if F.rank(phi) == n * N.dim:
                found = True
                break
        if not found:
            break
        best = n
        n += 1
    return best


def nsurj(M: FdModule, N: FdModule, r: int, **kw) -> Fraction:
    if r < 1:
        raise ValueError("r must be >= 1")
    return Fraction(surj_number(power(M, r), N, **kw)[0], r)


def asn_estimate(M: FdModule, N: FdModule, r_max: int, **kw) -> tuple[list[Fraction], tuple[Fraction, Fraction]]:
    """nsurj(M, N; r) for r = 1..r_max and the bracket [max, mu(M)/mu(N)]."""
    values = [nsurj(M, N, r, **kw) for r in range(1, r_max + 1)]
    return values, (max(values), Fraction(mu(M), mu(N)))


# ---------------------------------------------------------------------------
# subspace covering and splitting surjections off a summand


def greedy_cover(F: PrimeField, W, parts: list, ambient: int) -> list[int]:
    """Indices of parts U_i with W + sum U_i = ambient space.

    Parts are taken greedily whenever they raise the dimension, so at most
    dim(V / W) of them are used.
    """
    W = F.mat(W, cols=ambient) if np.asarray(W).size else F.zeros(0, ambient)
    cur = F.row_basis(W) if W.shape[0] else W
    dim = cur.shape[0]
    chosen = []
    for i, U in enumerate(parts):
        if dim == ambient:
            break
        U = F.mat(U, cols=ambient)
        if U.shape[0] == 0:
            continue
        nb = F.row_basis(np.vstack([cur, U]))
        if nb.shape[0] > dim:
            chosen.append(i)
            cur, dim = nb, nb.shape[0]
    if dim != ambient:
        raise ValueError("W and the parts do not span the ambient space")
    return chosen


@dataclass
class SplitResult:
    map: np.ndarray  # M -> N^(m - len(dropped))
    dropped: list[int]
    m: int


def split_surjection(M: FdModule, Mp: FdModule, N: FdModule, phi: np.ndarray, m: int) -> SplitResult:
    """From a surjection M + M' -> N^m build a surjection M -> N^(m - s), s <= mu(M').

    Reduce mod the maximal ideal, cover V = (N/mN)^m by the image of M plus
    coordinate summands, then project away the summands used.
    """
    F = M.field
    phi = F.mat(phi)
    if phi.shape != (m * N.dim, M.dim + Mp.dim):
        raise ValueError("phi has the wrong shape")
    if F.rank(phi) != m * N.dim:
        raise ValueError("phi is not surjective")
    if Mp.dim == 0:
        return SplitResult(phi.copy(), [], m)
    _, proj_n = top_data(N)
    reps_m, _ = top_data(M)
    mu_n = proj_n.shape[0]
    big_proj = np.kron(F.identity(m), proj_n)
    ambient = m * mu_n
    W = F.matmul(big_proj, phi[:, : M.dim], reps_m).T if M.dim else F.zeros(0, ambient)
    parts = []
    for i in range(m):
        U = F.zeros(mu_n, ambient)
        U[:, i * mu_n:(i + 1) * mu_n] = F.identity(mu_n)
        parts.append(U)
    dropped = greedy_cover(F, W, parts, ambient)
    keep = [i for i in range(m) if i not in dropped]
    rows = [phi[i * N.dim:(i + 1) * N.dim, : M.dim] for i in keep]
    out = np.vstack(rows) if rows else F.zeros(0, M.dim)
    if out.shape[0] and F.rank(out) != out.shape[0]:
        raise AssertionError("split map is not surjective")
    return SplitResult(out, dropped, m)


# ---------------------------------------------------------------------------
# oracle for the class-space layer


class TestbedOracle:
    """Realises labelled indecomposables over a preset algebra."""

    __test__ = False

    def __init__(self, algebra: LocalAlgebra, labels: dict[str, FdModule] | None = None,
                 exhaustion_bound: int = DEFAULT_EXHAUSTION_BOUND, seed: int = 0):
        self.algebra = algebra
        self.labels = labels if labels is not None else indecomposables(algebra)
        self.exhaustion_bound = exhaustion_bound
        self.seed = seed
        self._cache: dict = {}
        self._targets: dict = {}
        self._lock = threading.Lock()
        self.inexact = 0

    def registry(self):
        from .theta_space import IndecRegistry

        names = list(self.labels)
        return IndecRegistry(names, {k: mu(self.labels[k]) for k in names})

    def module(self, counts: dict[str, int]) -> FdModule:
        parts = []
        for label in sorted(counts):
            parts.extend([self.labels[label]] * int(counts[label]))
        if not parts:
            return zero_module(self.algebra)
        return direct_sum(*parts)

    def surj(self, counts: dict[str, int], N: FdModule) -> int:
        # keep N alive so its id cannot be recycled while cached
        self._targets[id(N)] = N
        key = (tuple(sorted((k, v) for k, v in counts.items() if v)), id(N))
        if key in self._cache:
            return self._cache[key]
        n, cert = surj_number(self.module(counts), N, self.exhaustion_bound, self.seed)
        with self._lock:
            if key not in self._cache:
                self._cache[key] = n
                self.inexact += not cert.exact
        return n

    def mu(self, N: FdModule) -> int:
        return mu(N)

    def find_surjection(self, source: FdModule, target: FdModule):
        """``(witness or None, exact)`` for a surjection source -> target."""
        n, cert = surj_number(source, target, self.exhaustion_bound, self.seed)
        if n >= 1:
            return cert.witness[: target.dim], True
        return None, cert.exact
