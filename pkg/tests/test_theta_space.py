from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualfsig.surjlab import TestbedOracle, preset_algebra
from dualfsig.theta_space import (
    FrobeniusContext,
    IndecRegistry,
    ThetaVector,
    asn_on_theta,
    floor_part,
    lattice,
    norm,
    positivity_check,
    s_from_fl,
    support_data,
    surj_on_theta,
    surj_sequence,
    to_fraction,
)

REG = IndecRegistry(["M1", "M2"], {"M1": 2, "M2": 1})


@pytest.fixture(scope="module")
def oracle():
    return TestbedOracle(preset_algebra("F2[x]/(x^2)"))


def test_to_fraction():
    assert to_fraction(1.7) == Fraction(17, 10)
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(2) == 2
    with pytest.raises(ValueError):
        to_fraction(float("nan"))
    with pytest.raises(TypeError):
        to_fraction(object())


def test_floor_examples():
    assert floor_part(ThetaVector(REG, {"M1": 1.7, "M2": -0.3})) == ThetaVector(REG, {"M1": 1})
    a = ThetaVector(REG, {"M1": 3, "M2": 2})
    assert floor_part(a) == a
    assert floor_part(ThetaVector(REG, {"M1": 2.0, "M2": 0.999})) == ThetaVector(REG, {"M1": 2})


def test_support_examples():
    assert support_data(ThetaVector.zero(REG)) == (frozenset(), 0)
    assert support_data(ThetaVector(REG, {"M1": 0.5})) == (frozenset({"M1"}), 2)
    assert support_data(ThetaVector(REG, {"M1": 1, "M2": -1})) == (frozenset({"M1"}), 2)


def test_arithmetic_and_lattice():
    a = ThetaVector(REG, {"M1": "1/2", "M2": 3})
    b = ThetaVector(REG, {"M1": 2, "M2": -1})
    assert (a + b)["M1"] == Fraction(5, 2)
    assert (a - a) == ThetaVector.zero(REG)
    assert (a * 2)["M1"] == 1
    sup, inf, leq = lattice(a, b)
    assert sup == ThetaVector(REG, {"M1": 2, "M2": 3})
    assert inf == ThetaVector(REG, {"M1": "1/2", "M2": -1})
    assert not leq and lattice(inf, a)[2]
    assert norm(b) == 5 and norm(b, weighted=False) == 3
    with pytest.raises(KeyError):
        ThetaVector(REG, {"M3": 1})
    other = IndecRegistry(["M1"], {"M1": 1})
    with pytest.raises(ValueError):
        a + ThetaVector(other, {"M1": 1})


fracs = st.fractions(min_value=-10, max_value=10, max_denominator=12)


@settings(max_examples=100, deadline=None)
@given(fracs, fracs)
def test_json_round_trip(x, y):
    a = ThetaVector(REG, {"M1": x, "M2": y})
    assert ThetaVector.from_json(a.to_json()) == a


def test_surj_on_theta_examples(oracle):
    reg = oracle.registry()
    N_R, N_k = oracle.labels["R"], oracle.labels["k"]
    assert surj_on_theta(ThetaVector(reg, {"k": "1/2"}), N_k, oracle) == 0
    assert surj_on_theta(ThetaVector(reg, {"R": 3}), N_R, oracle) == 3
    assert surj_on_theta(ThetaVector(reg, {"k": 1.5}), N_k, oracle) == 1


def test_asn_examples(oracle):
    reg = oracle.registry()
    N_R, N_k = oracle.labels["R"], oracle.labels["k"]
    assert surj_sequence(ThetaVector(reg, {"R": 1}), N_R, oracle, 4) == [1, 1, 1, 1]
    assert asn_on_theta(ThetaVector.zero(reg), N_R, oracle, 3) == (0, 0, 0)
    a = ThetaVector(reg, {"k": 1, "R": 1})
    seq = surj_sequence(a, N_k, oracle, 4)
    assert seq == [2, 2, 2, 2]
    assert asn_on_theta(a, N_k, oracle, 4) == (2, 2, 2)
    # half-integral coefficients: t=1 floors away the k part
    seq = surj_sequence(ThetaVector(reg, {"k": "1/2"}), N_k, oracle, 4)
    assert seq == [0, Fraction(1, 2), Fraction(1, 3), Fraction(1, 2)]
    assert asn_on_theta(ThetaVector(reg, {"k": "1/2"}), N_k, oracle, 4)[:2] == (Fraction(1, 2),) * 2


def test_s_from_fl(oracle):
    reg = oracle.registry()
    R = oracle.labels["R"]
    assert s_from_fl(FrobeniusContext(2, 1, 0, ThetaVector.zero(reg)), R, oracle, 3)[0] == 0
    assert s_from_fl(FrobeniusContext(2, 1, 0, ThetaVector(reg, {"R": 1})), R, oracle, 3)[0] == 1
    ctx = FrobeniusContext(2, 1, 0, ThetaVector(reg, {"R": "1/2"}))
    assert ctx.delta == 1
    assert s_from_fl(ctx, R, oracle, 4)[1] > 0
    with pytest.raises(ValueError):
        FrobeniusContext(2, 1, 0, ThetaVector(reg, {"R": -1}))


def test_positivity(oracle):
    reg = oracle.registry()
    R, k = oracle.labels["R"], oracle.labels["k"]
    half_k = FrobeniusContext(2, 1, 0, ThetaVector(reg, {"k": "1/2"}))
    assert positivity_check(half_k, k, oracle)
    res = positivity_check(half_k, R, oracle)
    assert not res.positive and res.exact
    free = FrobeniusContext(2, 1, 0, ThetaVector(reg, {"R": "1/2"}))
    for M in (R, k, oracle.module({"R": 2, "k": 1})):
        res = positivity_check(free, M, oracle)
        assert res.positive and res.witness is not None
