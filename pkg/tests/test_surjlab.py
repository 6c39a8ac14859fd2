from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest

from dualfsig.gfp_linalg import PrimeField
from dualfsig.surjlab import (
    PRESET_ALGEBRAS,
    LocalAlgebra,
    TestbedOracle,
    asn_estimate,
    brute_force_surj,
    direct_sum,
    greedy_cover,
    hom_space,
    indecomposables,
    is_module_map,
    mu,
    nsurj,
    parse_module,
    power,
    preset_algebra,
    split_surjection,
    surj_number,
)

F2X = "F2[x]/(x^2)"


@pytest.fixture
def A():
    return preset_algebra(F2X)


def test_presets_are_local_algebras():
    for name in PRESET_ALGEBRAS:
        A = preset_algebra(name)
        for M in indecomposables(A).values():
            assert M.dim >= 1
    with pytest.raises(KeyError):
        preset_algebra("nope")


def test_algebra_validation():
    with pytest.raises(ValueError):
        LocalAlgebra(2, np.zeros((2, 2, 2)))  # e_0 is not a unit
    with pytest.raises(ValueError):
        LocalAlgebra(2, np.zeros((2, 2)))


def test_mu_examples(A):
    assert mu(parse_module(A, "R")) == 1
    assert mu(parse_module(A, "k")) == 1
    assert mu(parse_module(A, "R+k")) == 2
    assert mu(parse_module(A, "0")) == 0
    assert mu(parse_module(preset_algebra("F3[x,y]/(x,y)^2"), "E")) == 2


def test_parse_module(A):
    assert parse_module(A, "2R+k").dim == 5
    assert parse_module(A, "R^2").dim == 4
    with pytest.raises(ValueError):
        parse_module(A, "R+Q")


def test_hom_space(A):
    R, k = parse_module(A, "R"), parse_module(A, "k")
    assert len(hom_space(k, R)) == 1
    assert len(hom_space(R, R)) == 2
    assert len(hom_space(R, k)) == 1
    for h in hom_space(R, k):
        assert is_module_map(R, k, h)


def test_surj_examples(A):
    R, k = parse_module(A, "R"), parse_module(A, "k")
    n, cert = surj_number(R, k)
    assert n == 1 and cert.exact and cert.refuted_by == "mu-bound"
    assert surj_number(parse_module(A, "R+k"), k)[0] == 2
    assert surj_number(power(R, 3), R)[0] == 3
    assert surj_number(k, R)[0] == 0
    with pytest.raises(ValueError):
        surj_number(R, parse_module(A, "0"))


def test_certificate_witness_is_surjective(A):
    M, N = parse_module(A, "2R+k"), parse_module(A, "k")
    n, cert = surj_number(M, N)
    assert n == 3
    assert is_module_map(M, power(N, n), cert.witness)
    assert M.field.rank(cert.witness) == n * N.dim


@pytest.mark.parametrize("name", list(PRESET_ALGEBRAS))
def test_surj_matches_brute_force(name):
    A = preset_algebra(name)
    mods = indecomposables(A)
    checked = 0
    for (a, M), (b, N) in itertools.product(mods.items(), repeat=2):
        for n in (1, 2):
            src = power(M, n)
            if src.dim > 6:
                continue
            s, cert = surj_number(src, N)
            assert cert.exact
            # brute force has to refute s + 1 over every point of Hom(src, N^(s+1))
            if A.p ** ((s + 1) * len(hom_space(src, N))) > 60000:
                continue
            checked += 1
            assert s == brute_force_surj(src, N), (a, b, n)
    assert checked >= len(mods)


def test_e_module_refuted_by_rank():
    A = preset_algebra("F3[x,y]/(x,y)^2")
    E, R = parse_module(A, "E"), parse_module(A, "R")
    n, cert = surj_number(E, R)
    assert n == 0 and cert.exact


def test_nsurj_and_asn(A):
    R, k = parse_module(A, "R"), parse_module(A, "k")
    assert [nsurj(R, R, r) for r in (1, 2, 3)] == [1, 1, 1]
    assert [nsurj(k, k, r) for r in (1, 2, 3)] == [1, 1, 1]
    values, (lo, hi) = asn_estimate(parse_module(A, "R+k"), k, 3)
    assert values == [2, 2, 2] and (lo, hi) == (2, 2)
    with pytest.raises(ValueError):
        nsurj(R, R, 0)


def test_greedy_cover():
    F2 = PrimeField(2)
    assert greedy_cover(F2, np.eye(2), [[[1, 0]], [[0, 1]]], 2) == []
    assert greedy_cover(F2, [], [[[1, 0]], [[0, 1]]], 2) == [0, 1]
    parts = [[[0, 1, 0]], [[1, 1, 0]], [[0, 0, 1]]]
    chosen = greedy_cover(F2, [[1, 0, 0]], parts, 3)
    assert len(chosen) == 2
    with pytest.raises(ValueError):
        greedy_cover(F2, [], [[[1, 0]]], 2)


def test_split_surjection_examples(A):
    R, k = parse_module(A, "R"), parse_module(A, "k")
    zero = parse_module(A, "0")
    n, cert = surj_number(R, k)
    res = split_surjection(R, zero, k, cert.witness, n)
    assert res.dropped == [] and np.array_equal(res.map, cert.witness)

    n, cert = surj_number(direct_sum(R, k), k)
    assert n == 2
    res = split_surjection(R, k, k, cert.witness, 2)
    assert len(res.dropped) == 1 and res.map.shape == (1, 2)
    assert A.field.rank(res.map) == 1

    R2 = power(R, 2)
    n, cert = surj_number(direct_sum(R2, R), R)
    assert n == 3
    res = split_surjection(R2, R, R, cert.witness, 3)
    assert len(res.dropped) == 1 and A.field.rank(res.map) == 4


def test_split_rejects_non_surjection(A):
    R, k = parse_module(A, "R"), parse_module(A, "k")
    with pytest.raises(ValueError):
        split_surjection(R, k, k, np.zeros((2, 3), dtype=np.int64), 2)


def test_oracle_caches_and_finds(A):
    O = TestbedOracle(A)
    k = O.labels["k"]
    assert O.surj({"R": 2, "k": 1}, k) == 3
    assert O.surj({"k": 1, "R": 2}, k) == 3
    w, exact = O.find_surjection(O.module({"R": 1}), k)
    assert w is not None and exact and w.shape == (1, 2)
    w, exact = O.find_surjection(O.module({"k": 1}), O.labels["R"])
    assert w is None and exact
    assert O.inexact == 0
