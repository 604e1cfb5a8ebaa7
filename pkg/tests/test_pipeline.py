"""End-to-end reductions and their certificates."""

from fractions import Fraction

import pytest

from ltcforge.algebra import Field, VecSpace
from ltcforge.codes import Alphabet, make_rate, repetition_code, vector_alphabet
from ltcforge.errors import DomainError
from ltcforge.pipeline import (
    IncompleteReportError,
    certify,
    general_reduction,
    linear_reduction,
    semilinear_reduction,
)
from ltcforge.testers import equality_tester, soundness_exact


def desk_linear_inputs():
    code = repetition_code(vector_alphabet(2, 1), 2)
    tester = equality_tester(code.alphabet, 2)
    mu = soundness_exact(tester, code).value
    return code, tester, mu


def desk_plain_inputs():
    code = repetition_code(Alphabet.plain(2), 2)
    tester = equality_tester(code.alphabet, 2)
    mu = soundness_exact(tester, code).value
    return code, tester, mu


def test_linear_reduction_demo_all_exact():
    code, tester, mu = desk_linear_inputs()
    report = linear_reduction(code, tester, mu, VecSpace(Field(2), 2), 2, seed=3)
    assert report.overall == "pass"
    assert report.achieved["soundness"].mode == "exact"
    assert report.params["k"] == 4
    assert report.stages["final_code"].n == 8
    assert report.promised["distance"] == Fraction(3, 4)
    assert report.achieved["distance"] >= Fraction(3, 4)
    # direct rate and the displayed formula disagree by the factor c
    assert report.promised["rate"] == make_rate(Fraction(1, 16))
    assert report.promised["rate_closed_form"] == make_rate(Fraction(1, 8))
    assert report.achieved["rate"] == report.promised["rate"]
    assert report.verdicts["linearity"] == "pass"


def test_linear_reduction_rejects_c1_with_two_queries():
    code, tester, mu = desk_linear_inputs()
    with pytest.raises(DomainError):
        linear_reduction(code, tester, mu, VecSpace(Field(2), 2), 1)


def test_linear_reduction_rejects_bad_c():
    code, tester, mu = desk_linear_inputs()
    with pytest.raises(DomainError):
        linear_reduction(code, tester, mu, VecSpace(Field(2), 2), 3)


def test_general_reduction_demo_conditional():
    code, tester, mu = desk_plain_inputs()
    report = general_reduction(code, tester, mu, 3, 3, seed=3, trials=4000)
    assert report.overall == "conditional"
    assert report.verdicts["soundness"] == "consistent"
    assert report.achieved["soundness"].mode == "sampled"
    assert report.params["k"] == 9
    assert report.promised["distance"] == Fraction(2, 3)
    assert report.achieved["inner_soundness"] == Fraction(2, 3)
    assert report.achieved["rate"] == make_rate(Fraction(1, 18), 2, 3)


def test_general_reduction_no_valid_c_for_binary_two_query():
    code, tester, mu = desk_plain_inputs()
    with pytest.raises(DomainError):
        general_reduction(code, tester, mu, 2, 2)  # c = 2 requires q >= 3


def test_semilinear_reduction_demo():
    code, tester, mu = desk_linear_inputs()
    report = semilinear_reduction(code, tester, mu, seed=3, trials=4000)
    assert report.overall == "conditional"
    assert report.params["k"] == 10  # t + 2 t^2 with t = 2
    assert report.stages["final_code"].n == 20
    assert report.promised["distance"] == Fraction(1, 10)
    assert report.achieved["inner_distance"] == Fraction(2, 5)
    assert report.verdicts["inner_distance"] == "pass"
    assert report.achieved["inner_soundness"] >= Fraction(1, 100)


def test_semilinear_rejects_plain_alphabet():
    code, tester, mu = desk_plain_inputs()
    with pytest.raises(DomainError):
        semilinear_reduction(code, tester, mu)


def test_certify_incomplete_report():
    code, tester, mu = desk_linear_inputs()
    report = linear_reduction(code, tester, mu, VecSpace(Field(2), 2), 2)
    report.achieved = dict(report.achieved)
    report.achieved["inner_soundness"] = None
    with pytest.raises(IncompleteReportError):
        certify(report)


def test_certify_detects_violation():
    code, tester, mu = desk_linear_inputs()
    report = linear_reduction(code, tester, mu, VecSpace(Field(2), 2), 2)
    report.promised = dict(report.promised)
    report.promised["distance"] = Fraction(99, 100)
    summary = certify(report)
    assert summary["verdicts"]["distance"] == "fail"
    assert summary["overall"] == "fail"


def test_pipeline_exact_when_budget_allows():
    # tiny final space: linear demo scans 4^8 words exactly
    code, tester, mu = desk_linear_inputs()
    report = linear_reduction(code, tester, mu, VecSpace(Field(2), 2), 2)
    assert report.achieved["soundness"].mode == "exact"
    assert report.achieved["soundness"].value >= report.promised["soundness"]


def test_pipeline_sampled_when_over_budget():
    code, tester, mu = desk_linear_inputs()
    report = linear_reduction(
        code, tester, mu, VecSpace(Field(2), 2), 2, budget=1000, trials=500, seed=11
    )
    assert report.achieved["soundness"].mode == "sampled"
    assert report.overall == "conditional"
    assert report.verdicts["soundness"] == "consistent"
