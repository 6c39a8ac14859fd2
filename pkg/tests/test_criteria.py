from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from dualfsig.criteria import (
    DEFAULT_SUITE_CAPS,
    case_label,
    classify,
    default_degree_bound,
    evaluate_criteria,
    kemper_depth,
    run_surjlab_suite,
)


def test_kemper_examples():
    assert kemper_depth(5, 3) == (11, 15, False)
    assert kemper_depth(5, 1) == (5, 5, True)
    assert kemper_depth(7, 4) == (16, 28, False)
    assert kemper_depth(3, 2) == (6, 6, True)
    with pytest.raises(ValueError):
        kemper_depth(5, 0)


def test_case_labels():
    assert case_label(3, 1) == "polynomial"
    assert [case_label(5, r) for r in (1, 2, 3, 4, 5)] == ["3", "4", "5", "6", "5"]


def test_evaluate_p5_r1():
    rep = evaluate_criteria(5, 1, 15)
    assert all(rep.cond2) and all(rep.cond3) and all(rep.cond4)
    assert rep.s_positive and rep.s_lower_bound == Fraction(1, 20)
    assert rep.det_v == "sign" and rep.first_failure is None


def test_evaluate_p5_r2():
    rep = evaluate_criteria(5, 2, 15)
    assert not rep.s_positive and rep.det_v == "trivial"
    failing = [v.d for v in rep.degrees if not v.cond2]
    assert failing == [0, 5, 10, 15]
    assert [v.h1_rad_pnu for v in rep.degrees if v.d in failing] == [1, 2, 3, 4]
    assert rep.first_failure == 0
    assert rep.cond2 == rep.cond3 == rep.cond4


def test_evaluate_p7_r3():
    rep = evaluate_criteria(7, 3, 21)
    assert rep.s_positive and all(rep.cond3)
    assert rep.s_lower_bound == Fraction(1, 42)


def test_evaluate_executor_matches_serial():
    with ThreadPoolExecutor(4) as ex:
        a = evaluate_criteria(5, 2, 10, ex).to_dict()
    assert a == evaluate_criteria(5, 2, 10).to_dict()


def test_default_bound():
    assert default_degree_bound(5) == 15
    assert evaluate_criteria(3, 1).D == 9


def test_bad_input():
    with pytest.raises(ValueError):
        evaluate_criteria(5, 0, 3)
    with pytest.raises(ValueError):
        classify(2, 1)


def test_classify_case3():
    row = classify(5, 1, 15)
    assert (row.group_order, row.has_pseudo_reflection, row.det_v) == (20, False, "sign")
    assert row.s_positive and row.s_lower_bound == Fraction(1, 20)
    assert row.f_rational and not row.weakly_f_regular
    assert row.to_dict()["s_lower_bound"] == "1/20"


def test_classify_case4():
    row = classify(5, 2, 15)
    assert row.gorenstein_flag and row.cohen_macaulay and not row.f_rational
    assert not row.quasi_gorenstein_flag and row.first_failure_degree == 0
    assert row.to_dict()["s_lower_bound"] == "0/1"


def test_classify_case6_and_polynomial():
    row = classify(5, 4, 10)
    assert row.quasi_gorenstein_flag and not row.cohen_macaulay and row.case_label == "6"
    row = classify(3, 1)
    assert row.has_pseudo_reflection and row.group_order == 6 and row.case_label == "polynomial"
    assert row.has_transposition and row.f_rational


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_truth_table(p, r):
    row = classify(p, r, 12)
    assert row.s_positive == (r % 2 == 1)
    assert row.cohen_macaulay == (r <= 2)
    assert row.f_rational == (r == 1)
    assert row.gorenstein_flag == (r == 2 or (p, r) == (3, 1))
    assert row.quasi_gorenstein_flag == (r % 2 == 0 and r > 2)


def test_suite_empty_caps():
    rep = run_surjlab_suite(0, {})
    assert rep["violations"] == 0 and rep["checks"] == {}


def test_suite_small_caps_deterministic():
    caps = {"f2_max_dim": 2, "f2_max_r": 2, "f3_samples": 40, "f3_max_summands": 2, "t_max": 2}
    a = run_surjlab_suite(3, caps)
    with ThreadPoolExecutor(3) as ex:
        b = run_surjlab_suite(3, caps, ex)
    assert a == b
    assert a["violations"] == 0
    assert a["f2_inexact"] == 0 and a["f3_instances"] == 40


def test_default_caps_shape():
    assert DEFAULT_SUITE_CAPS["f3_samples"] >= 1000
    assert DEFAULT_SUITE_CAPS["f2_max_dim"] == 3
