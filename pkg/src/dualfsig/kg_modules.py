"""Modular representations of G = AGL(1, p) over F_p.

Everything here is realised over the prime field: Gamma is cyclic of order
p - 1 and F_p^x already holds all (p-1)-th roots of unity, so the simple kG
modules (the characters of Gamma inflated along G -> G/Q) and their
projective covers are F_p-rational.  Both facts are checked at runtime rather
than assumed (see ``simples_and_projectives`` and ``socle``).

The polynomial ring B = Sym(P^r) is handled through its monomial basis.  G
permutes monomials, so B_d splits as a sum of permutation modules k[O], one
per G-orbit O of degree-d monomials.  Orbits are either enumerated directly
(small degrees) or counted by kernel type: a monomial is a function
f: F_p -> N^r, its stabiliser is the set of g preserving every fibre of f,
hence depends only on the set partition of F_p cut out by f.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .agl_group import AffineElement, AffineGroup, SmallGroup, make_group
from .gfp_linalg import PrimeField

__all__ = [
    "TheoryFalsified",
    "Representation",
    "GammaCharacter",
    "Monomial",
    "OrbitClass",
    "DecompReport",
    "character",
    "projective_cover",
    "permutation_module",
    "regular_module",
    "vector_rep",
    "symmetric_power",
    "orbit_module",
    "hom_dim",
    "simples_and_projectives",
    "det_of_rep",
    "identify_character",
    "socle",
    "top",
    "socle_series",
    "radical_series",
    "classify_monomial",
    "decompose_degree",
    "orbit_type_counts",
    "orbit_dichotomy",
    "covariants_dim",
    "h1_lhs",
    "h1_degree",
    "cover_map_surjective",
    "injective_hull_data",
    "fl_report",
    "det_character",
    "rad_projective",
    "h1_table",
    "monomials",
    "set_partitions",
    "cover_map_surjective_explicit",
]


class TheoryFalsified(RuntimeError):
    """A computation contradicted a statement the package relies on."""

    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


# ---------------------------------------------------------------------------
# representations


class Representation:
    """A finite-dimensional kG-module given by one matrix per group generator.

    Matrices act on column vectors.  Matrices of arbitrary group elements are
    produced on demand and cached.
    """

    def __init__(self, group, gen_matrices, field: PrimeField | None = None, name: str = ""):
        self.group = group
        self.field = field if field is not None else group.field
        self.gen_matrices = [self.field.mat(m) for m in gen_matrices]
        if len(self.gen_matrices) != len(group.gens):
            raise ValueError("need one matrix per group generator")
        shapes = {m.shape for m in self.gen_matrices}
        if len(shapes) != 1 or any(a != b for a, b in shapes):
            raise ValueError("generator matrices must be square and of equal size")
        self.dim = self.gen_matrices[0].shape[0]
        self.name = name
        self._cache: dict = {}

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<Representation{label} dim={self.dim} of {self.group!r}>"

    @property
    def p(self) -> int:
        return self.field.p

    # -- element matrices --------------------------------------------------

    def matrix(self, g) -> np.ndarray:
        if g in self._cache:
            return self._cache[g]
        G = self.group
        F = self.field
        if isinstance(G, AffineGroup):
            i, k = G.word(g)
            m = F.matmul(self._gen_power(0, i), self._gen_power(1, k))
            self._cache[g] = m
            return m
        self._fill_by_bfs()
        return self._cache[g]

    def _gen_power(self, which: int, e: int) -> np.ndarray:
        key = ("gen", which, e)
        if key not in self._cache:
            self._cache[key] = self.field.matpow(self.gen_matrices[which], e)
        return self._cache[key]

    def _fill_by_bfs(self) -> None:
        G, F = self.group, self.field
        self._cache[G.identity] = F.identity(self.dim)
        todo = [G.identity]
        while todo:
            nxt = []
            for g in todo:
                for s, ms in zip(G.gens, self.gen_matrices):
                    h = G.mul(g, s)
                    m = F.matmul(self._cache[g], ms)
                    if h in self._cache:
                        if not np.array_equal(self._cache[h], m):
                            raise ValueError("generator matrices do not define a representation")
                    else:
                        self._cache[h] = m
                        nxt.append(h)
            todo = nxt

    def check_relations(self) -> None:
        """Verify the defining relations; raises ``ValueError`` on failure."""
        F = self.field
        for m in self.gen_matrices:
            if F.rank(m) != self.dim:
                raise ValueError("generator matrix is not invertible")
        G = self.group
        if isinstance(G, AffineGroup):
            s, t = self.gen_matrices
            I = F.identity(self.dim)
            if not np.array_equal(F.matpow(s, G.p), I):
                raise ValueError("sigma^p != 1")
            if not np.array_equal(F.matpow(t, G.p - 1), I):
                raise ValueError("tau^(p-1) != 1")
            lhs = F.matmul(t, s, F.inverse(t))
            if not np.array_equal(lhs, F.matpow(s, G.alpha)):
                raise ValueError("tau sigma tau^-1 != sigma^alpha")
        else:
            self._cache.clear()
            self._fill_by_bfs()

    # -- constructions -----------------------------------------------------

    def _like(self, mats, name="") -> "Representation":
        return Representation(self.group, mats, self.field, name)

    def tensor(self, other: "Representation", name: str = "") -> "Representation":
        F = self.field
        mats = [np.mod(np.kron(a, b), F.p) for a, b in zip(self.gen_matrices, other.gen_matrices)]
        return self._like(mats, name or f"{self.name}(x){other.name}")

    def dual(self, name: str = "") -> "Representation":
        F = self.field
        return self._like([F.inverse(m).T.copy() for m in self.gen_matrices], name or f"{self.name}*")

    def direct_sum(self, other: "Representation", name: str = "") -> "Representation":
        mats = []
        for a, b in zip(self.gen_matrices, other.gen_matrices):
            m = np.zeros((a.shape[0] + b.shape[0],) * 2, dtype=np.int64)
            m[: a.shape[0], : a.shape[0]] = a
            m[a.shape[0]:, a.shape[0]:] = b
            mats.append(m)
        return self._like(mats, name or f"{self.name}+{other.name}")

    def power(self, n: int) -> "Representation":
        out = self
        for _ in range(n - 1):
            out = out.direct_sum(self)
        out.name = f"{self.name}^{n}"
        return out

    def submodule(self, basis_cols, name: str = "") -> "Representation":
        """Restriction to the invariant subspace spanned by ``basis_cols``."""
        F = self.field
        B = F.mat(basis_cols)
        mats = []
        for m in self.gen_matrices:
            x = F.solve(B, F.matmul(m, B))
            if x is None:
                raise ValueError("subspace is not invariant")
            mats.append(x)
        return self._like(mats, name)

    def quotient(self, sub_rows, name: str = "") -> "Representation":
        """Action on ``M / span(sub_rows)`` (rows are spanning vectors)."""
        F = self.field
        reps, proj = F.quotient_basis(self.dim, sub_rows)
        mats = [F.matmul(proj, m, reps) for m in self.gen_matrices]
        return self._like(mats, name)

    # -- subspaces -------------------------------------------------------

    def fixed_space(self) -> np.ndarray:
        """Basis (rows) of M^G."""
        F = self.field
        if self.dim == 0:
            return F.zeros(0, 0)
        I = F.identity(self.dim)
        return F.kernel_basis(np.vstack([m - I for m in self.gen_matrices]))

    def fixed_dim(self) -> int:
        F = self.field
        if self.dim == 0:
            return 0
        I = F.identity(self.dim)
        return self.dim - F.rank(np.vstack([m - I for m in self.gen_matrices]))


def hom_dim(M: Representation, N: Representation) -> int:
    """dim Hom_G(M, N) by solving X rho_M(s) = rho_N(s) X."""
    F = M.field
    if M.dim == 0 or N.dim == 0:
        return 0
    eqs = []
    for a, b in zip(M.gen_matrices, N.gen_matrices):
        # row-major vec(X): vec(X A) = (I kron A^T) vec X, vec(B X) = (B kron I) vec X
        eqs.append(np.kron(F.identity(N.dim), a.T) - np.kron(b, F.identity(M.dim)))
    return M.dim * N.dim - F.rank(np.mod(np.vstack(eqs), F.p))


# ---------------------------------------------------------------------------
# characters, projectives


@dataclass(frozen=True)
class GammaCharacter:
    """One-dimensional kG-module: sigma -> 1, tau -> alpha**j."""

    j: int
    p: int
    alpha: int

    @property
    def value(self) -> int:
        return pow(self.alpha, self.j, self.p)

    def __call__(self, g: AffineElement) -> int:
        # chi_j(a, b) = a**j
        return pow(g.a, self.j, self.p)

    @property
    def label(self) -> str:
        if self.j == 0:
            return "trivial"
        if 2 * self.j == self.p - 1:
            return "sign"
        return f"chi_{self.j}"

    def inverse(self) -> "GammaCharacter":
        return GammaCharacter((-self.j) % (self.p - 1), self.p, self.alpha)

    def __mul__(self, other: "GammaCharacter") -> "GammaCharacter":
        return GammaCharacter((self.j + other.j) % (self.p - 1), self.p, self.alpha)

    def __repr__(self) -> str:
        return f"chi_{self.j}" if self.label.startswith("chi") else self.label


def identify_character(G: AffineGroup, value_on_tau: int) -> GammaCharacter:
    value_on_tau %= G.p
    if value_on_tau not in G.log:
        raise TheoryFalsified(f"tau-eigenvalue {value_on_tau} is not a unit of F_{G.p}")
    return GammaCharacter(G.log[value_on_tau], G.p, G.alpha)


def character(G: AffineGroup, j: int) -> Representation:
    chi = GammaCharacter(j % (G.p - 1), G.p, G.alpha)
    return Representation(G, [[[1]], [[chi.value]]], name=repr(chi))


def det_character(G: AffineGroup, r: int) -> GammaCharacter:
    """Determinant character of V = P^r, computed from the matrices."""
    return det_of_rep(vector_rep(G, r))


def projective_cover(G: AffineGroup, j: int) -> tuple[Representation, np.ndarray]:
    """P_j = Ind_Gamma^G chi_j and its cover map P_j -> chi_j.

    Basis e_x (x in F_p) indexes cosets g Gamma by g(0); then
    (a, b) e_x = a**j e_{ax+b}.  The cover map sends every e_x to 1.
    """
    p = G.p
    mats = []
    for g in G.gens:
        m = np.zeros((p, p), dtype=np.int64)
        for x in range(p):
            m[g(x), x] = pow(g.a, j, p)
        mats.append(m)
    P = Representation(G, mats, name=f"P_{j}")
    return P, np.ones((1, p), dtype=np.int64)


def permutation_module(G: AffineGroup) -> Representation:
    """P = k^p with phi w_i = w_{phi(i)}."""
    P, _ = projective_cover(G, 0)
    P.name = "P"
    return P


def vector_rep(G: AffineGroup, r: int) -> Representation:
    V = permutation_module(G).power(r) if r > 1 else permutation_module(G)
    V.name = f"P^{r}" if r > 1 else "P"
    return V


def regular_module(G) -> Representation:
    idx = {g: i for i, g in enumerate(G.elements)}
    n = len(G.elements)
    mats = []
    for s in G.gens:
        m = np.zeros((n, n), dtype=np.int64)
        for h in G.elements:
            m[idx[G.mul(s, h)], idx[h]] = 1
        mats.append(m)
    field = getattr(G, "field", None)
    return Representation(G, mats, field, name="kG")


def rad_projective(P: Representation) -> Representation:
    """rad M = (sigma - 1) M for this group (kG / (sigma-1) is kGamma)."""
    F = P.field
    img = F.column_space(P.gen_matrices[0] - F.identity(P.dim))
    return P.submodule(img, name=f"rad {P.name}")


def simples_and_projectives(G: AffineGroup):
    """Simple modules (as characters) and their projective covers.

    Runtime check: the top of kG, kG / (sigma-1)kG, is a Gamma-module on which
    tau is diagonalisable over F_p with each of the p-1 characters occurring
    exactly once (it is the regular kGamma-module).
    """
    chars = [GammaCharacter(j, G.p, G.alpha) for j in range(G.p - 1)]
    kG = regular_module(G)
    layers = top(kG)
    if sorted(c.j for c, m in layers for _ in range(m)) != list(range(G.p - 1)):
        raise TheoryFalsified("top of kG is not the multiplicity-free sum of Gamma-characters")
    projectives = []
    for c in chars:
        P, h = projective_cover(G, c.j)
        P.check_relations()
        projectives.append((P, h))
    return chars, projectives


def det_of_rep(W: Representation) -> GammaCharacter:
    F = W.field
    G = W.group
    ds = [F.det(m) for m in W.gen_matrices]
    if ds[0] != 1:
        raise TheoryFalsified("determinant is nontrivial on sigma")
    return identify_character(G, ds[1])


# ---------------------------------------------------------------------------
# socles and radicals


def _gamma_decompose(G: AffineGroup, F: PrimeField, tau_matrix: np.ndarray) -> list[tuple[GammaCharacter, int]]:
    k = tau_matrix.shape[0]
    out = []
    total = 0
    for j in range(G.p - 1):
        lam = pow(G.alpha, j, G.p)
        mult = k - F.rank(np.mod(tau_matrix - lam * F.identity(k), F.p)) if k else 0
        if mult:
            out.append((GammaCharacter(j, G.p, G.alpha), mult))
            total += mult
    if total != k:
        raise TheoryFalsified("tau does not diagonalise over F_p on a Gamma-module")
    return out


def _socle_basis(M: Representation) -> np.ndarray:
    F = M.field
    return F.kernel_basis(M.gen_matrices[0] - F.identity(M.dim))


def socle(M: Representation) -> list[tuple[GammaCharacter, int]]:
    """Socle of M as (character, multiplicity) pairs.

    Computed as the Q-fixed subspace: simple modules have trivial Q-action
    and kGamma is semisimple, so M^Q is exactly the socle.
    """
    if M.dim == 0:
        return []
    basis = _socle_basis(M)
    if basis.shape[0] == 0:
        return []
    sub = M.submodule(basis.T)
    return _gamma_decompose(M.group, M.field, sub.gen_matrices[1])


def top(M: Representation) -> list[tuple[GammaCharacter, int]]:
    """M / rad M as (character, multiplicity) pairs."""
    F = M.field
    if M.dim == 0:
        return []
    img = F.column_space(M.gen_matrices[0] - F.identity(M.dim))
    quo = M.quotient(img.T)
    if quo.dim == 0:
        return []
    return _gamma_decompose(M.group, F, quo.gen_matrices[1])


def socle_series(M: Representation) -> list[list[tuple[GammaCharacter, int]]]:
    """Layers soc^{i+1} M / soc^i M, bottom first."""
    layers = []
    cur = M
    while cur.dim:
        basis = _socle_basis(cur)
        layers.append(socle(cur))
        cur = cur.quotient(basis)
    return layers


def radical_series(M: Representation) -> list[list[tuple[GammaCharacter, int]]]:
    """Layers rad^i M / rad^{i+1} M, top first."""
    layers = []
    cur = M
    while cur.dim:
        layers.append(top(cur))
        cur = rad_projective(cur)
    return layers


# ---------------------------------------------------------------------------
# monomials and orbits


@dataclass(frozen=True, order=True)
class Monomial:
    """Exponent vector over w_{j,i}, stored at index j*p + i."""

    exps: tuple[int, ...]
    p: int
    r: int

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def block(self, j: int) -> tuple[int, ...]:
        return self.exps[j * self.p:(j + 1) * self.p]

    def act(self, g: AffineElement) -> "Monomial":
        p = self.p
        new = [0] * len(self.exps)
        for j in range(self.r):
            base = j * p
            for i in range(p):
                new[base + g(i)] = self.exps[base + i]
        return Monomial(tuple(new), p, self.r)

    def is_block_constant(self) -> bool:
        return all(len(set(self.block(j))) == 1 for j in range(self.r))


def monomials(p: int, r: int, d: int):
    """All degree-d monomials in r*p variables, in increasing lex order."""
    n = r * p

    def rec(prefix, left, slots):
        if slots == 1:
            yield prefix + (left,)
            return
        for e in range(left + 1):
            yield from rec(prefix + (e,), left - e, slots - 1)

    if n == 0:
        return
    for exps in rec((), d, n):
        yield Monomial(exps, p, r)


def orbit_module(G: AffineGroup, points: list, act) -> Representation:
    """Permutation module k[X] for a G-stable list of points."""
    idx = {x: i for i, x in enumerate(points)}
    n = len(points)
    mats = []
    for s in G.gens:
        m = np.zeros((n, n), dtype=np.int64)
        for x in points:
            m[idx[act(x, s)], idx[x]] = 1
        mats.append(m)
    return Representation(G, mats)


def symmetric_power(G: AffineGroup, r: int, d: int, cap: int = 5000) -> Representation:
    """B_d = degree-d part of Sym(P^r) with its monomial basis."""
    n = math.comb(d + r * G.p - 1, r * G.p - 1)
    if n > cap:
        raise ValueError(f"dim B_{d} = {n} exceeds cap {cap}")
    basis = list(monomials(G.p, r, d))
    M = orbit_module(G, basis, lambda m, g: m.act(g))
    M.name = f"B_{d}"
    return M


@dataclass
class OrbitClass:
    representative: Monomial
    orbit_size: int
    stabilizer_order: int
    q_free: bool
    classification: str  # "trivial" or "projective"
    multiplicities: dict[int, int] = field(default_factory=dict)


def _orbit(G: AffineGroup, lam: Monomial) -> list[Monomial]:
    return sorted({lam.act(g) for g in G.elements})


def _projective_multiplicities(G: AffineGroup, module: Representation) -> dict[int, int]:
    out = {}
    for j in range(G.p - 1):
        m = hom_dim(module, character(G, j))
        if m:
            out[j] = m
    return out


def classify_monomial(lam: Monomial, G: AffineGroup) -> OrbitClass:
    """Orbit, stabiliser and summand type of the G-orbit through ``lam``.

    Block-constant monomials span a trivial summand.  Any other orbit must be
    Q-free; the projective multiplicities are dim Hom_G(k[orbit], chi_j).
    """
    orbit = _orbit(G, lam)
    stab = [g for g in G.elements if lam.act(g) == lam]
    q_free = not any(g.a == 1 and g.b != 0 for g in stab)
    if len(orbit) * len(stab) != G.order:
        raise TheoryFalsified("orbit-stabiliser count failed")
    rep = orbit[0]
    if lam.is_block_constant():
        if len(orbit) != 1:
            raise TheoryFalsified("block-constant monomial with nontrivial orbit")
        return OrbitClass(rep, 1, len(stab), q_free, "trivial")
    if not q_free:
        raise TheoryFalsified(f"non-constant monomial {lam.exps} has a nontrivial Q-stabiliser")
    module = orbit_module(G, orbit, lambda m, g: m.act(g))
    mults = _projective_multiplicities(G, module)
    return OrbitClass(rep, len(orbit), len(stab), q_free, "projective", mults)


# -- orbit types via set partitions ----------------------------------------


def set_partitions(n: int):
    """Restricted growth strings of length n (each is a set partition)."""
    if n == 0:
        yield ()
        return

    def rec(prefix, top_):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(top_ + 2):
            yield from rec(prefix + [v], max(top_, v))

    yield from rec([0], 0)


def _canonical_rgs(labels) -> tuple[int, ...]:
    seen = {}
    out = []
    for x in labels:
        if x not in seen:
            seen[x] = len(seen)
        out.append(seen[x])
    return tuple(out)


@dataclass
class OrbitType:
    key: tuple
    representative: tuple[int, ...]  # restricted growth string
    stabilizer_order: int
    q_free: bool
    partitions: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def constant(self) -> bool:
        return max(self.representative) == 0


def _subgroup_key(G: AffineGroup, H: list[AffineElement]) -> tuple:
    keys = []
    for x in G.elements:
        xi = x.inverse()
        keys.append(tuple(sorted((g.a, g.b) for g in (x * h * xi for h in H))))
    return min(keys)


@lru_cache(maxsize=None)
def _orbit_types(p: int) -> dict:
    """Group every set partition of F_p by the conjugacy class of its stabiliser."""
    G = make_group(p)
    types: dict[tuple, OrbitType] = {}
    for rgs in set_partitions(p):
        stab = [g for g in G.elements if all(rgs[g(x)] == rgs[x] for x in range(p))]
        key = _subgroup_key(G, stab)
        q_free = not any(g.a == 1 and g.b != 0 for g in stab)
        if max(rgs) > 0 and not q_free:
            raise TheoryFalsified(f"partition {rgs} of F_{p} is fixed by a nontrivial translation")
        if key not in types:
            types[key] = OrbitType(key, rgs, len(stab), q_free)
        types[key].partitions.append(rgs)
    return types


@lru_cache(maxsize=None)
def _all_count(sizes: tuple[int, ...], r: int, d: int) -> int:
    """#{(v_b) in (N^r)^m : sum_b sizes[b]*|v_b| = d} (values not nec. distinct)."""
    poly = [0] * (d + 1)
    poly[0] = 1
    for s in sizes:
        nxt = [0] * (d + 1)
        for deg, c in enumerate(poly):
            if not c:
                continue
            k = 0
            while deg + s * k <= d:
                nxt[deg + s * k] += c * math.comb(k + r - 1, r - 1)
                k += 1
        poly = nxt
    return poly[d]


@lru_cache(maxsize=None)
def _exact_count(sizes: tuple[int, ...], r: int, d: int) -> int:
    """Like ``_all_count`` but with pairwise distinct values (Moebius inversion)."""
    m = len(sizes)
    total = 0
    for sig in set_partitions(m):
        merged = [0] * (max(sig) + 1)
        parts = Counter(sig)
        for b, c in enumerate(sig):
            merged[c] += sizes[b]
        mu = 1
        for c in parts.values():
            mu *= (-1) ** (c - 1) * math.factorial(c - 1)
        total += mu * _all_count(tuple(sorted(merged)), r, d)
    return total


def _block_sizes(rgs: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted(Counter(rgs).values()))


@lru_cache(maxsize=None)
def orbit_type_counts(p: int, r: int, d: int) -> tuple[tuple[tuple, int], ...]:
    """Number of G-orbits of degree-d monomials of each orbit type.

    Returns ``((type_key, count), ...)`` sorted by key.  Raises
    ``TheoryFalsified`` if the monomial count does not match dim B_d or an
    orbit count comes out fractional.
    """
    G = make_group(p)
    types = _orbit_types(p)
    total = 0
    out = []
    for key in sorted(types):
        t = types[key]
        n = 0
        for rgs in t.partitions:
            n += _exact_count(_block_sizes(rgs), r, d)
        total += n
        q, rem = divmod(n * t.stabilizer_order, G.order)
        if rem:
            raise TheoryFalsified(f"fractional orbit count for type {key} in degree {d}", d)
        if q:
            out.append((key, q))
    expected = math.comb(d + r * p - 1, r * p - 1)
    if total != expected:
        raise TheoryFalsified(f"monomial count {total} != dim B_{d} = {expected}", d)
    return tuple(out)


def orbit_dichotomy(p: int, r: int, d: int) -> dict[str, int]:
    """Tally the degree-d orbits as block-constant, Q-free, or neither.

    Every orbit type is looked up by its stabiliser; ``exceptions`` counts
    orbits that are neither block-constant nor Q-free.
    """
    types = _orbit_types(p)
    out = {"orbits": 0, "block_constant": 0, "q_free": 0, "exceptions": 0}
    for key, count in orbit_type_counts(p, r, d):
        t = types[key]
        out["orbits"] += count
        if t.constant:
            out["block_constant"] += count
        elif t.q_free:
            out["q_free"] += count
        else:
            out["exceptions"] += count
    return out


@lru_cache(maxsize=None)
def _type_module(p: int, key: tuple) -> Representation:
    G = make_group(p)
    t = _orbit_types(p)[key]
    lam = Monomial(t.representative, p, 1)
    orbit = _orbit(G, lam)
    return orbit_module(G, orbit, lambda m, g: m.act(g))


@lru_cache(maxsize=None)
def _type_class(p: int, key: tuple) -> OrbitClass:
    G = make_group(p)
    t = _orbit_types(p)[key]
    return classify_monomial(Monomial(t.representative, p, 1), G)


@dataclass
class DecompReport:
    p: int
    r: int
    d: int
    dim_bd: int
    trivial: int
    proj: dict[int, int]
    method: str = "orbit-types"

    @property
    def dim_check(self) -> bool:
        return self.trivial + self.p * sum(self.proj.values()) == self.dim_bd


def decompose_degree(p: int, r: int, d: int, method: str = "auto", enumerate_cap: int = 20000) -> DecompReport:
    """Trivial and projective summand counts of B_d.

    ``method="enumerate"`` scans every monomial in lex order, takes the
    lexicographically smallest member of each new orbit as representative and
    classifies it.  ``method="types"`` counts orbits by kernel type instead
    (scales to any degree).  ``"auto"`` enumerates when dim B_d is at most
    ``enumerate_cap``.
    """
    dim_bd = math.comb(d + r * p - 1, r * p - 1)
    if method == "auto":
        method = "enumerate" if dim_bd <= enumerate_cap else "types"
    G = make_group(p)
    proj: Counter = Counter()
    trivial = 0
    if method == "enumerate":
        seen = set()
        mult_cache: dict = {}
        for lam in monomials(p, r, d):
            if lam in seen:
                continue
            orbit = _orbit(G, lam)
            seen.update(orbit)
            stab = frozenset(g for g in G.elements if lam.act(g) == lam)
            if stab not in mult_cache:
                mult_cache[stab] = classify_monomial(lam, G)
            oc = mult_cache[stab]
            if oc.classification == "trivial":
                trivial += 1
            else:
                proj.update(oc.multiplicities)
    elif method == "types":
        for key, count in orbit_type_counts(p, r, d):
            oc = _type_class(p, key)
            if oc.classification == "trivial":
                trivial += count
            else:
                for j, m in oc.multiplicities.items():
                    proj[j] += count * m
    else:
        raise ValueError(f"unknown method {method!r}")
    report = DecompReport(p, r, d, dim_bd, trivial, dict(sorted(proj.items())), method)
    if not report.dim_check:
        raise TheoryFalsified(f"dimension check failed for p={p} r={r} d={d}", d)
    return report


# ---------------------------------------------------------------------------
# covariants and cohomology


def _tensor_types(p: int, r: int, d: int, W: Representation, fn):
    """Sum ``count * fn(k[O] (x) W)`` over orbit types of degree d."""
    total = 0
    for key, count in orbit_type_counts(p, r, d):
        total += count * fn(_type_module(p, key).tensor(W))
    return total


def covariants_dim(W: Representation, p: int, r: int, d: int, method: str = "types") -> int:
    """dim (B_d (x) W)^G."""
    if method == "explicit":
        return symmetric_power(W.group, r, d).tensor(W).fixed_dim()
    return _tensor_types(p, r, d, W, lambda M: M.fixed_dim())


def h1_lhs(M: Representation) -> int:
    """dim H^1(G, M) = dim H^1(Q, M)^Gamma.

    H^1(Q, M) = ker N / im(sigma - 1) with N = 1 + sigma + ... + sigma^(p-1).
    tau acts on a class [m] by tau (1 + sigma + ... + sigma^(a-1)) m, where
    sigma^a = tau^-1 sigma tau.
    """
    G = M.group
    F = M.field
    n = M.dim
    if n == 0:
        return 0
    S, T = M.gen_matrices
    I = F.identity(n)
    powers = [I]
    for _ in range(G.p - 1):
        powers.append(F.matmul(powers[-1], S))
    norm = np.mod(sum(powers), F.p)
    K = F.kernel_basis(norm)  # rows
    if K.shape[0] == 0:
        return 0
    J = F.column_space(S - I)  # columns, inside ker N
    Kc = K.T
    j_coords = F.solve(Kc, J) if J.shape[1] else np.zeros((K.shape[0], 0), dtype=np.int64)
    if j_coords is None:
        raise TheoryFalsified("im(sigma - 1) not inside ker N")
    reps, proj = F.quotient_basis(K.shape[0], j_coords.T)
    q = reps.shape[1]
    if q == 0:
        return 0
    a = pow(G.alpha, -1, G.p)
    U = F.matmul(T, np.mod(sum(powers[:a]), F.p))
    images = F.matmul(U, Kc, reps)
    coords = F.solve(Kc, images)
    if coords is None:
        raise TheoryFalsified("Gamma-action does not preserve ker N")
    X = F.matmul(proj, coords)
    return q - F.rank(np.mod(X - F.identity(q), F.p))


def h1_degree(p: int, r: int, d: int, W: Representation) -> int:
    """dim H^1(G, B_d (x) W), summed over orbit types."""
    return _tensor_types(p, r, d, W, h1_lhs)


def _map_surjective_on_invariants(X: Representation, P: Representation, h: np.ndarray, D: Representation) -> bool:
    """Is (X (x) P)^G -> (X (x) D)^G, induced by h: P -> D, onto?"""
    F = X.field
    src = X.tensor(P).fixed_space()
    tgt = X.tensor(D).fixed_dim()
    if tgt == 0:
        return True
    if src.shape[0] == 0:
        return False
    lifted = np.kron(F.identity(X.dim), h)
    return F.rank(F.matmul(lifted, src.T)) == tgt


@lru_cache(maxsize=None)
def _cover_data(p: int, r: int):
    G = make_group(p)
    det = det_character(G, r)
    P, h = projective_cover(G, det.j)
    return det, P, h, character(G, det.j), rad_projective(P)


@lru_cache(maxsize=None)
def _type_cover_surjective(p: int, r: int, key: tuple) -> bool:
    det, P, h, D, _ = _cover_data(p, r)
    return _map_surjective_on_invariants(_type_module(p, key), P, h, D)


def cover_map_surjective(p: int, r: int, d: int) -> bool:
    """Is (B_d (x) P_nu)^G -> (B_d (x) det_V)^G onto, P_nu -> det_V the cover?"""
    return all(_type_cover_surjective(p, r, key) for key, _ in orbit_type_counts(p, r, d))


def cover_map_surjective_explicit(p: int, r: int, d: int, cap: int = 5000) -> bool:
    G = make_group(p)
    det, P, h, D, _ = _cover_data(p, r)
    return _map_surjective_on_invariants(symmetric_power(G, r, d, cap), P, h, D)


@lru_cache(maxsize=None)
def _type_h1(p: int, r: int, key: tuple, which: str) -> int:
    W = _named_module(p, r, which)
    return h1_lhs(_type_module(p, key).tensor(W))


@lru_cache(maxsize=None)
def _named_module(p: int, r: int, which: str) -> Representation:
    G = make_group(p)
    if which == "radPnu":
        return _cover_data(p, r)[4]
    if which in ("k", "B"):
        return character(G, 0)
    raise ValueError(f"unknown module {which!r}")


def h1_table(p: int, r: int, d: int, which: str = "radPnu") -> int:
    """dim H^1(G, B_d (x) W) for W = rad P_nu ("radPnu") or W = k ("B"/"k").

    ``"k"`` means H^1(G, k) itself (degree ignored); ``"B"`` means B_d.
    """
    if which == "k":
        return h1_lhs(character(make_group(p), 0))
    return sum(count * _type_h1(p, r, key, which) for key, count in orbit_type_counts(p, r, d))


# ---------------------------------------------------------------------------
# injective hull, Frobenius limit


def injective_hull_data(p: int, r: int = 1):
    """I = injective hull of k, the embedding k -> I and the quotient I/k.

    kG is selfinjective, so I is the indecomposable projective with socle k.
    """
    G = make_group(p)
    for j in range(p - 1):
        P, _ = projective_cover(G, j)
        soc = socle(P)
        if soc == [(GammaCharacter(0, p, G.alpha), 1)]:
            break
    else:
        raise TheoryFalsified("no projective indecomposable with socle k")
    emb = _socle_basis(P).T  # p x 1
    quo = P.quotient(emb.T, name="I/k")
    P.name = "I"
    return P, emb, quo


def fl_report(p: int, r: int = 1):
    """Frobenius limit of the canonical module, sum_i dim V_i / |G| [M_i]."""
    from .theta_space import IndecRegistry, ThetaVector

    G = make_group(p)
    chars, projectives = simples_and_projectives(G)
    labels = [f"M{c.j}" for c in chars]
    # mu of the completed covariant modules is not computed; weight 1
    registry = IndecRegistry(labels, {lab: 1 for lab in labels})
    coeffs = {}
    for c, lab in zip(chars, labels):
        dim_v = character(G, c.j).dim
        coeffs[lab] = Fraction(dim_v, G.order)
    return ThetaVector(registry, coeffs)
