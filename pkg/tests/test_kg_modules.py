from __future__ import annotations

import math

import numpy as np
import pytest

from dualfsig.agl_group import bar_h1, make_group
from dualfsig.kg_modules import (
    GammaCharacter,
    Monomial,
    TheoryFalsified,
    character,
    classify_monomial,
    covariants_dim,
    cover_map_surjective,
    cover_map_surjective_explicit,
    decompose_degree,
    det_character,
    det_of_rep,
    fl_report,
    h1_lhs,
    h1_table,
    hom_dim,
    injective_hull_data,
    orbit_type_counts,
    permutation_module,
    projective_cover,
    rad_projective,
    socle,
    socle_series,
    radical_series,
    simples_and_projectives,
    symmetric_power,
    top,
    vector_rep,
)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_simples_and_projectives(p):
    G = make_group(p)
    chars, projectives = simples_and_projectives(G)
    assert len(chars) == p - 1
    assert len({c.value for c in chars}) == p - 1
    for c, (P, h) in zip(chars, projectives):
        assert P.dim == p
        assert top(P) == [(c, 1)]
        assert hom_dim(P, character(G, c.j)) == 1
        assert len(socle(P)) == 1 and socle(P)[0][1] == 1
        # the cover map is G-linear
        chi = character(G, c.j)
        for m, s in zip(P.gen_matrices, chi.gen_matrices):
            assert np.array_equal(G.field.matmul(h, m), G.field.matmul(s, h))


def test_relations_hold():
    for p in (3, 5, 7):
        G = make_group(p)
        for j in range(p - 1):
            projective_cover(G, j)[0].check_relations()
        vector_rep(G, 2).check_relations()
        symmetric_power(G, 1, 3).check_relations()


def test_det_v():
    G = make_group(5)
    assert det_of_rep(permutation_module(G)).label == "sign"
    assert det_character(G, 2).label == "trivial"
    assert det_character(G, 3).label == "sign"
    sign = det_character(G, 1)
    assert sign != GammaCharacter(0, 5, G.alpha)
    assert sign.value == 4


def test_socle_examples():
    G = make_group(5)
    k = character(G, 0)
    assert socle(k) == [(GammaCharacter(0, 5, 2), 1)]
    assert socle(character(G, 2)) == [(GammaCharacter(2, 5, 2), 1)]


@pytest.mark.parametrize("p", [5, 7])
def test_projectives_uniserial(p):
    G = make_group(p)
    P, _ = projective_cover(G, 1)
    layers = radical_series(P)
    assert len(layers) == p and all(len(x) == 1 and x[0][1] == 1 for x in layers)


def test_classify_monomial_examples():
    G = make_group(5)
    oc = classify_monomial(Monomial((1, 1, 1, 1, 1), 5, 1), G)
    assert (oc.classification, oc.orbit_size) == ("trivial", 1)
    oc = classify_monomial(Monomial((1, 0, 0, 0, 0), 5, 1), G)
    assert (oc.orbit_size, oc.stabilizer_order, oc.multiplicities) == (5, 4, {0: 1})
    oc = classify_monomial(Monomial((2, 1, 0, 0, 0), 5, 1), G)
    assert (oc.orbit_size, oc.stabilizer_order) == (20, 1)
    assert oc.multiplicities == {0: 1, 1: 1, 2: 1, 3: 1}


# values computed by explicit lex-order orbit enumeration
DECOMP = {
    (5, 1, 0): (1, {}),
    (5, 1, 1): (0, {0: 1}),
    (5, 1, 2): (0, {0: 2, 2: 1}),
    (5, 1, 3): (0, {0: 3, 1: 1, 2: 2, 3: 1}),
    (5, 1, 5): (1, {0: 8, 1: 5, 2: 7, 3: 5}),
    (5, 1, 7): (0, {0: 20, 1: 14, 2: 18, 3: 14}),
    (3, 2, 3): (2, {0: 12, 1: 6}),
    (3, 3, 3): (3, {0: 35, 1: 19}),
    (7, 1, 3): (0, {0: 4, 1: 1, 2: 2, 3: 2, 4: 2, 5: 1}),
    (5, 2, 5): (2, {0: 114, 1: 90, 2: 106, 3: 90}),
}


@pytest.mark.parametrize("key", sorted(DECOMP))
def test_decompose_frozen(key):
    p, r, d = key
    rep = decompose_degree(p, r, d, method="types")
    assert (rep.trivial, rep.proj) == DECOMP[key]
    assert rep.dim_check and rep.dim_bd == math.comb(d + r * p - 1, r * p - 1)


@pytest.mark.parametrize("p,r,dmax", [(3, 1, 6), (3, 2, 4), (5, 1, 6), (5, 2, 3), (7, 1, 3)])
def test_enumeration_agrees_with_types(p, r, dmax):
    for d in range(dmax + 1):
        a = decompose_degree(p, r, d, method="enumerate")
        b = decompose_degree(p, r, d, method="types")
        assert (a.trivial, a.proj) == (b.trivial, b.proj)


def test_orbit_type_counts_large_degree():
    # p=7, r=3, d=12 has ~2.3e8 monomials; the type route must still balance
    counts = orbit_type_counts(7, 3, 12)
    assert sum(c for _, c in counts) > 0
    assert decompose_degree(7, 3, 12).dim_check


def test_covariants():
    G = make_group(5)
    k = character(G, 0)
    assert covariants_dim(k, 5, 1, 0) == 1
    hilbert = [covariants_dim(k, 5, 1, d) for d in range(8)]
    assert hilbert == [1, 1, 2, 3, 6, 9, 14, 20]
    assert hilbert[:6] == [covariants_dim(k, 5, 1, d, "explicit") for d in range(6)]
    det = character(G, det_character(G, 2).j)
    assert [covariants_dim(det, 5, 2, d) for d in range(5)] == [covariants_dim(k, 5, 2, d) for d in range(5)]


def test_h1_examples():
    for p in (3, 5, 7):
        G = make_group(p)
        assert h1_lhs(character(G, 0)) == 0
        for j in range(p - 1):
            assert h1_lhs(projective_cover(G, j)[0]) == 0
    assert [h1_table(5, 1, d) for d in range(11)] == [0] * 11
    assert [h1_table(5, 2, d) for d in range(11)] == [1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 3]
    assert [h1_table(3, 2, d) for d in range(7)] == [1, 0, 0, 2, 0, 0, 3]
    assert [h1_table(5, 2, d, "B") for d in range(8)] == [0] * 8


def test_h1_routes_agree_small():
    G = make_group(5)
    radP = rad_projective(projective_cover(G, 2)[0])
    for d in range(3):
        M = symmetric_power(G, 1, d).tensor(radP)
        assert h1_lhs(M) == bar_h1(G, M)


def test_cover_map():
    assert all(cover_map_surjective(5, 1, d) for d in range(16))
    assert [d for d in range(11) if not cover_map_surjective(5, 2, d)] == [0, 5, 10]
    for d in range(4):
        assert cover_map_surjective_explicit(5, 2, d) == cover_map_surjective(5, 2, d)
        assert cover_map_surjective_explicit(3, 3, d) == cover_map_surjective(3, 3, d)


def test_injective_hull():
    I, emb, quo = injective_hull_data(5)
    assert I.dim == 5 and quo.dim == 4
    assert socle(I) == [(GammaCharacter(0, 5, 2), 1)]
    G = make_group(5)
    radP = rad_projective(projective_cover(G, det_character(G, 1).j)[0])
    twisted = radP.dual().tensor(character(G, det_character(G, 1).j))
    assert socle_series(twisted) == socle_series(quo)


def test_fl_report():
    v = fl_report(7)
    assert len(v.coeffs) == 6
    assert set(v.coeffs.values()) == {__import__("fractions").Fraction(1, 42)}


def test_symmetric_power_cap():
    with pytest.raises(ValueError):
        symmetric_power(make_group(7), 3, 6, cap=100)
