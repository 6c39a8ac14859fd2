"""The affine group x -> ax + b on F_p, plus a tiny table-driven group layer.

``AffineGroup(p)`` is the Frobenius group of order p(p-1) with normal Sylow
p-subgroup Q (translations, generated by ``sigma``) and cyclic complement
Gamma (scalings, generated by ``tau``).  ``SmallGroup`` hosts the symmetric
groups S_2 and S_3 used for the characteristic-2 example.

Both group classes expose the same small protocol used elsewhere in the
package: ``elements``, ``gens``, ``identity``, ``order``, ``mul``, ``inv`` and
``index``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .gfp_linalg import PrimeField, is_prime

__all__ = [
    "AffineElement",
    "AffineGroup",
    "SmallGroup",
    "make_group",
    "symmetric_group",
    "primitive_root",
    "as_permutation",
    "sign",
    "has_transposition",
    "is_pseudo_reflection",
    "bar_h1",
    "CapExceeded",
]


class CapExceeded(RuntimeError):
    """Dense cocycle system too large; use ``kg_modules.h1_lhs`` instead."""


@dataclass(frozen=True, order=True)
class AffineElement:
    """The map x -> a*x + b on F_p."""

    a: int
    b: int
    p: int

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        # (a1,b1) o (a2,b2) = (a1 a2, a1 b2 + b1)
        p = self.p
        return AffineElement((self.a * other.a) % p, (self.a * other.b + self.b) % p, p)

    def __call__(self, x: int) -> int:
        return (self.a * x + self.b) % self.p

    def inverse(self) -> "AffineElement":
        ai = pow(self.a, -1, self.p)
        return AffineElement(ai, (-ai * self.b) % self.p, self.p)

    def __repr__(self) -> str:
        return f"({self.a},{self.b})"


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group F_p^x."""
    if p == 2:
        return 1
    for g in range(2, p):
        x, order = g, 1
        while x != 1:
            x = (x * g) % p
            order += 1
        if order == p - 1:
            return g
    raise ValueError(f"no primitive root mod {p}")


class AffineGroup:
    """G = Q x| Gamma inside S_p for an odd prime p."""

    def __init__(self, p: int):
        if p % 2 == 0 or not is_prime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        self.p = p
        self.field = PrimeField(p)
        self.alpha = primitive_root(p)
        self.identity = AffineElement(1, 0, p)
        self.sigma = AffineElement(1, 1, p)
        self.tau = AffineElement(self.alpha, 0, p)
        self.gens = [self.sigma, self.tau]
        self.elements = [AffineElement(a, b, p) for a in range(1, p) for b in range(p)]
        self._index = {g: i for i, g in enumerate(self.elements)}
        # discrete log base alpha
        self.log = {}
        x = 1
        for k in range(p - 1):
            self.log[x] = k
            x = (x * self.alpha) % p

    def __repr__(self) -> str:
        return f"AffineGroup(p={self.p})"

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, g: AffineElement, h: AffineElement) -> AffineElement:
        return g * h

    def inv(self, g: AffineElement) -> AffineElement:
        return g.inverse()

    def index(self, g: AffineElement) -> int:
        return self._index[g]

    @cached_property
    def Q(self) -> list[AffineElement]:
        return [g for g in self.elements if g.a == 1]

    @cached_property
    def Gamma(self) -> list[AffineElement]:
        return [g for g in self.elements if g.b == 0]

    def word(self, g: AffineElement) -> tuple[int, int]:
        """Exponents ``(i, k)`` with ``g == sigma**i * tau**k``."""
        return g.b, self.log[g.a]

    def power(self, g: AffineElement, e: int) -> AffineElement:
        out = self.identity
        for _ in range(e % self.order):
            out = out * g
        return out

    def element_order(self, g: AffineElement) -> int:
        x, n = g, 1
        while x != self.identity:
            x = x * g
            n += 1
        return n

    def check(self) -> None:
        """Verify the structural invariants; raises AssertionError."""
        p = self.p
        assert self.order == p * (p - 1)
        assert len(self.Q) == p and self.element_order(self.sigma) == p
        assert len(self.Gamma) == p - 1 and self.element_order(self.tau) == p - 1
        for q in self.Q:
            for g in self.elements:
                assert (g * q * g.inverse()).a == 1
        seen = set()
        for q in self.Q:
            for c in self.Gamma:
                seen.add(q * c)
        assert len(seen) == self.order


def make_group(p: int) -> AffineGroup:
    G = AffineGroup(p)
    G.check()
    return G


class SmallGroup:
    """A finite group given by an explicit multiplication table.

    Elements are the integers ``0 .. n-1``; ``labels`` keeps the original
    objects (permutation tuples for symmetric groups).
    """

    def __init__(self, labels: list, table: list[list[int]], gens: list[int]):
        self.labels = list(labels)
        self.table = [list(row) for row in table]
        self.gens = list(gens)
        n = len(self.labels)
        self.elements = list(range(n))
        ids = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if len(ids) != 1:
            raise ValueError("multiplication table has no unique identity")
        self.identity = ids[0]
        self._inv = {}
        for g in range(n):
            inv = [h for h in range(n) if self.table[g][h] == self.identity]
            if len(inv) != 1:
                raise ValueError("multiplication table is not a group")
            self._inv[g] = inv[0]
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise ValueError("multiplication table is not associative")
        if len(_closure(self, self.gens)) != n:
            raise ValueError("generators do not generate the group")

    def __repr__(self) -> str:
        return f"SmallGroup(order={self.order})"

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self._inv[g]

    def index(self, g: int) -> int:
        return g


def _closure(G, gens) -> set:
    seen = {G.identity}
    todo = deque([G.identity])
    while todo:
        g = todo.popleft()
        for s in gens:
            h = G.mul(g, s)
            if h not in seen:
                seen.add(h)
                todo.append(h)
    return seen


def symmetric_group(n: int) -> SmallGroup:
    """S_n acting on {0..n-1}; product is composition (g*h)(x) = g(h(x))."""
    perms = sorted(itertools.permutations(range(n)))
    idx = {q: i for i, q in enumerate(perms)}
    table = [[idx[tuple(g[h[x]] for x in range(n))] for h in perms] for g in perms]
    gens = []
    if n >= 2:
        gens.append(idx[tuple([1, 0] + list(range(2, n)))])
    if n >= 3:
        gens.append(idx[tuple(list(range(1, n)) + [0])])
    return SmallGroup(perms, table, gens)


def as_permutation(g) -> tuple[int, ...]:
    """The permutation x -> a x + b of {0, ..., p-1}."""
    if isinstance(g, AffineElement):
        return tuple(g(x) for x in range(g.p))
    return tuple(g)


def sign(g) -> int:
    """Parity of a permutation (or of an affine element acting on F_p)."""
    perm = as_permutation(g)
    seen = [False] * len(perm)
    s = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def has_transposition(G: AffineGroup) -> bool:
    for g in G.elements:
        perm = as_permutation(g)
        if sum(1 for x, y in enumerate(perm) if x != y) == 2:
            return True
    return False


def is_pseudo_reflection(g, rep) -> bool:
    """rank(rho(g) - 1) == 1 over F_p."""
    F = rep.field
    m = rep.matrix(g)
    return F.rank(m - F.identity(rep.dim)) == 1


def spanning_tree(G):
    """BFS tree over the Cayley graph: parent edges and the non-tree edges."""
    order = [G.identity]
    parent = {G.identity: None}
    todo = deque([G.identity])
    extra = []
    while todo:
        g = todo.popleft()
        for si, s in enumerate(G.gens):
            h = G.mul(g, s)
            if h not in parent:
                parent[h] = (g, si)
                order.append(h)
                todo.append(h)
            else:
                extra.append((g, si))
    return order, parent, extra


def bar_h1(G, M, cap: int = 20000) -> int:
    """dim H^1(G, M) straight from the 1-cocycle condition.

    A cocycle satisfies f(gh) = f(g) + g f(h); it is determined by its values
    on the generators.  Writing f(g) as a linear expression in those values
    along a spanning tree of the Cayley graph, every remaining edge (g, s)
    imposes f(gs) = f(g) + g f(s).  Then dim H^1 = dim Z^1 - dim B^1 with
    dim B^1 = dim M - dim M^G.
    """
    n = M.dim
    if G.order * n > cap:
        raise CapExceeded(
            f"|G|*dim M = {G.order * n} exceeds cap {cap}; use kg_modules.h1_lhs"
        )
    F = M.field
    ngen = len(G.gens)
    if n == 0:
        return 0
    order, parent, extra = spanning_tree(G)
    # coeff[g] : n x (ngen*n) matrix expressing f(g) in the generator values
    coeff = {G.identity: F.zeros(n, ngen * n)}
    for g in order[1:]:
        h, si = parent[g]
        c = coeff[h].copy()
        c[:, si * n:(si + 1) * n] += M.matrix(h)
        coeff[g] = c % F.p
    rows = []
    for g, si in extra:
        h = G.mul(g, G.gens[si])
        c = coeff[g].copy()
        c[:, si * n:(si + 1) * n] += M.matrix(g)
        rows.append((coeff[h] - c) % F.p)
    system = np.vstack(rows) if rows else F.zeros(0, ngen * n)
    z1 = ngen * n - (F.rank(system) if rows else 0)
    fixed = n - F.rank(np.vstack([M.matrix(s) - F.identity(n) for s in G.gens]))
    b1 = n - fixed
    return z1 - b1
