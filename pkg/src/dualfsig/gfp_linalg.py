"""Exact dense linear algebra over a prime field F_p.

Matrices are plain 2-D ``int64`` numpy arrays holding residues in ``[0, p)``.
Vectors are 1-D arrays.  Every routine returns fresh arrays; inputs are never
mutated.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "PrimeField",
    "is_prime",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """The field F_p with dense matrix routines.

    All arithmetic is exact.  ``p`` must be prime and below 2**31 so that a
    product of two residues fits in an int64.
    """

    def __init__(self, p: int):
        p = int(p)
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 2**31:
            raise ValueError("modulus must be below 2**31")
        self.p = p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    # -- element helpers -------------------------------------------------

    def inv(self, x: int) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(x, -1, self.p)

    def mat(self, m, cols: int | None = None) -> np.ndarray:
        """Coerce ``m`` into a canonical 2-D residue array."""
        a = np.asarray(m, dtype=np.int64)
        if a.ndim == 1 and cols is not None:
            a = a.reshape(-1, cols)
        if a.ndim != 2:
            if a.size == 0:
                return np.zeros((0, cols or 0), dtype=np.int64)
            raise ValueError("expected a 2-D matrix")
        return np.mod(a, self.p)

    def vec(self, v) -> np.ndarray:
        return np.mod(np.asarray(v, dtype=np.int64).reshape(-1), self.p)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def matmul(self, *ms) -> np.ndarray:
        out = np.asarray(ms[0], dtype=np.int64)
        for m in ms[1:]:
            out = np.mod(out @ np.asarray(m, dtype=np.int64), self.p)
        return np.mod(out, self.p)

    def matpow(self, m, e: int) -> np.ndarray:
        m = self.mat(m)
        out = self.identity(m.shape[0])
        base = m
        while e > 0:
            if e & 1:
                out = self.matmul(out, base)
            base = self.matmul(base, base)
            e >>= 1
        return out

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)

    # -- elimination -----------------------------------------------------

    def rref(self, m) -> tuple[np.ndarray, int, list[int]]:
        """Reduced row echelon form, rank and pivot columns.

        First-nonzero pivoting; arithmetic is exact so no magnitude heuristic
        is needed.
        """
        p = self.p
        a = self.mat(m).copy()
        rows, cols = a.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                a[[r, i]] = a[[i, r]]
            piv = int(a[r, c])
            if piv != 1:
                a[r, c:] = (a[r, c:] * pow(piv, -1, p)) % p
            col = a[:, c].copy()
            col[r] = 0
            hit = np.flatnonzero(col)
            if hit.size:
                a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
            pivots.append(c)
            r += 1
        return a, r, pivots

    def batch_rref(self, stack) -> tuple[np.ndarray, np.ndarray]:
        """Row-reduce a stack of matrices (shape K x m x n) at once.

        Returns the reduced stack and the rank of each matrix.
        """
        p = self.p
        a = np.mod(np.asarray(stack, dtype=np.int64), p).copy()
        K, m, n = a.shape
        rank = np.zeros(K, dtype=np.int64)
        if K == 0:
            return a, rank
        inv = np.zeros(p, dtype=np.int64)
        for x in range(1, p):
            inv[x] = pow(x, -1, p)
        rowidx = np.arange(m)
        for c in range(n):
            mask = (a[:, :, c] != 0) & (rowidx[None, :] >= rank[:, None])
            ks = np.flatnonzero(mask.any(axis=1))
            if ks.size == 0:
                continue
            piv = np.argmax(mask[ks], axis=1)
            r = rank[ks]
            prow = a[ks, piv].copy()
            a[ks, piv] = a[ks, r]
            a[ks, r] = (prow * inv[prow[:, c]][:, None]) % p
            f = a[ks, :, c].copy()
            f[np.arange(ks.size), r] = 0
            a[ks] = (a[ks] - f[:, :, None] * a[ks, r][:, None, :]) % p
            rank[ks] += 1
        return a, rank

    def rank(self, m) -> int:
        a = self.mat(m)
        if a.size == 0:
            return 0
        # eliminate along the shorter side
        if a.shape[0] > a.shape[1]:
            a = a.T
        return self.rref(a)[1]

    def row_basis(self, m) -> np.ndarray:
        """Rows of the rref spanning the row space of ``m`` (canonical form)."""
        a = self.mat(m)
        red, rk, _ = self.rref(a)
        return red[:rk].copy()

    def kernel_basis(self, m) -> np.ndarray:
        """Basis of the right null space, one vector per row.

        The result has ``cols - rank`` rows.
        """
        a = self.mat(m)
        cols = a.shape[1]
        red, rk, pivots = self.rref(a)
        free = [c for c in range(cols) if c not in set(pivots)]
        basis = np.zeros((len(free), cols), dtype=np.int64)
        for k, f in enumerate(free):
            basis[k, f] = 1
            for i, pc in enumerate(pivots):
                basis[k, pc] = (-red[i, f]) % self.p
        return basis

    def solve(self, m, b) -> np.ndarray | None:
        """Some ``x`` with ``m @ x == b``, or ``None`` when inconsistent.

        ``b`` may be a vector or a matrix of right-hand sides (one per column).
        """
        a = self.mat(m)
        b_arr = np.asarray(b, dtype=np.int64)
        vector = b_arr.ndim == 1
        bm = self.mat(b_arr.reshape(-1, 1) if vector else b_arr)
        if bm.shape[0] != a.shape[0]:
            raise ValueError(
                f"right-hand side has {bm.shape[0]} rows, matrix has {a.shape[0]}"
            )
        rows, cols = a.shape
        red, rk, pivots = self.rref(np.hstack([a, bm]))
        if any(pc >= cols for pc in pivots):
            return None
        x = np.zeros((cols, bm.shape[1]), dtype=np.int64)
        for i, pc in enumerate(pivots):
            x[pc] = red[i, cols:]
        return x[:, 0] if vector else x

    def inverse(self, m) -> np.ndarray:
        a = self.mat(m)
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("inverse of a non-square matrix")
        red, rk, _ = self.rref(np.hstack([a, self.identity(n)]))
        if rk < n or not np.array_equal(red[:, :n], self.identity(n)):
            raise ZeroDivisionError("matrix is singular")
        return red[:, n:].copy()

    def det(self, m) -> int:
        p = self.p
        a = self.mat(m).copy()
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("determinant of a non-square matrix")
        d = 1
        for c in range(n):
            nz = np.flatnonzero(a[c:, c])
            if nz.size == 0:
                return 0
            i = c + int(nz[0])
            if i != c:
                a[[c, i]] = a[[i, c]]
                d = -d
            piv = int(a[c, c])
            d = (d * piv) % p
            inv = pow(piv, -1, p)
            below = a[c + 1:, c]
            hit = np.flatnonzero(below) + c + 1
            if hit.size:
                f = (a[hit, c] * inv) % p
                a[hit, c:] = (a[hit, c:] - np.outer(f, a[c, c:])) % p
        return d % p

    # -- subspaces -------------------------------------------------------

    def quotient_basis(self, ambient_dim: int, sub) -> tuple[np.ndarray, np.ndarray]:
        """Complete ``sub`` to a basis and project onto the quotient.

        ``sub`` holds spanning vectors of a subspace as rows.  Returns
        ``(reps, proj)``: ``reps`` is ``ambient_dim x q`` whose columns map to a
        basis of the quotient, and ``proj`` is ``q x ambient_dim`` with kernel
        exactly ``span(sub)`` and ``proj @ reps == I``.
        """
        n = int(ambient_dim)
        s = self.mat(sub, cols=n) if np.asarray(sub).size else self.zeros(0, n)
        if s.shape[1] != n:
            raise ValueError("subspace vectors do not live in the ambient space")
        sb, _, pivots = self.rref(s)
        sb = sb[:len(pivots)]
        free = [c for c in range(n) if c not in set(pivots)]
        q = len(free)
        reps = np.zeros((n, q), dtype=np.int64)
        for k, f in enumerate(free):
            reps[f, k] = 1
        basis = np.hstack([sb.T, reps]) if sb.shape[0] else reps
        if n == 0:
            return reps, np.zeros((0, 0), dtype=np.int64)
        proj = self.inverse(basis)[sb.shape[0]:].copy()
        return reps, proj

    def column_space(self, m) -> np.ndarray:
        """Basis of the column space, as columns."""
        a = self.mat(m)
        if a.size == 0:
            return np.zeros((a.shape[0], 0), dtype=np.int64)
        return self.row_basis(a.T).T.copy()

    def in_span(self, basis_rows, v) -> bool:
        b = self.mat(basis_rows, cols=len(v))
        base = self.rank(b) if b.shape[0] else 0
        return self.rank(np.vstack([b, self.vec(v)])) == base
