from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualfsig.gfp_linalg import PrimeField, is_prime


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_rejects_composite_and_huge():
    with pytest.raises(ValueError):
        PrimeField(9)
    with pytest.raises(ValueError):
        PrimeField(2**31 + 11)


def test_rref_examples():
    F = PrimeField(5)
    red, rk, piv = F.rref(np.eye(3, dtype=np.int64))
    assert rk == 3 and piv == [0, 1, 2]
    assert np.array_equal(red, np.eye(3))
    red, rk, _ = PrimeField(3).rref(np.zeros((2, 4)))
    assert rk == 0 and not red.any()
    assert F.rank([[1, 2], [2, 4]]) == 1


def test_kernel_examples():
    F5 = PrimeField(5)
    assert F5.kernel_basis(np.eye(4)).shape == (0, 4)
    assert PrimeField(2).kernel_basis([[0, 0, 0]]).shape == (3, 3)
    k = F5.kernel_basis([[1, 2], [2, 4]])
    assert k.shape == (1, 2)
    assert np.array_equal(k[0], [3, 1])


def test_solve_examples():
    F3 = PrimeField(3)
    assert np.array_equal(F3.solve(np.eye(3), [1, 2, 0]), [1, 2, 0])
    assert F3.solve(np.zeros((2, 2)), [1, 0]) is None
    assert np.array_equal(F3.solve([[1, 1], [0, 1]], [2, 1]), [1, 1])
    with pytest.raises(ValueError):
        F3.solve(np.eye(2), [1, 2, 3])


def test_quotient_basis_examples():
    F2 = PrimeField(2)
    reps, proj = F2.quotient_basis(2, np.eye(2))
    assert reps.shape == (2, 0)
    reps, proj = F2.quotient_basis(2, [])
    assert np.array_equal(proj, np.eye(2))
    reps, proj = F2.quotient_basis(2, [[1, 1]])
    assert reps.shape == (2, 1)
    assert not F2.matmul(proj, [1, 1]).any()
    assert np.array_equal(F2.matmul(proj, reps), [[1]])


def test_det_and_inverse():
    F7 = PrimeField(7)
    m = np.array([[2, 1], [3, 4]])
    assert F7.det(m) == (2 * 4 - 3) % 7
    assert np.array_equal(F7.matmul(m, F7.inverse(m)), np.eye(2))
    with pytest.raises(ZeroDivisionError):
        F7.inverse([[1, 2], [2, 4]])


primes = st.sampled_from([2, 3, 5, 7, 31])


@st.composite
def matrices(draw):
    p = draw(primes)
    r = draw(st.integers(1, 6))
    c = draw(st.integers(1, 6))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return PrimeField(p), np.array(entries, dtype=np.int64).reshape(r, c)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(data):
    F, m = data
    k = F.kernel_basis(m)
    assert F.rank(m) + k.shape[0] == m.shape[1]
    for v in k:
        assert not F.matmul(m, v).any()


@settings(max_examples=150, deadline=None)
@given(matrices(), st.integers(0, 2**32 - 1))
def test_solve_consistent(data, seed):
    F, m = data
    rng = np.random.default_rng(seed)
    b = F.matmul(m, rng.integers(0, F.p, m.shape[1]))
    x = F.solve(m, b)
    assert x is not None and np.array_equal(F.matmul(m, x), b)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_idempotent(data):
    F, m = data
    red, rk, _ = F.rref(m)
    red2, rk2, _ = F.rref(red)
    assert rk == rk2 and np.array_equal(red, red2)


@settings(max_examples=60, deadline=None)
@given(primes, st.integers(0, 2**32 - 1))
def test_batch_rref_matches_rref(p, seed):
    F = PrimeField(p)
    stack = np.random.default_rng(seed).integers(0, p, (20, 3, 4))
    red, ranks = F.batch_rref(stack)
    for i in range(20):
        r2, k2, _ = F.rref(stack[i])
        assert k2 == ranks[i] and np.array_equal(r2, red[i])
