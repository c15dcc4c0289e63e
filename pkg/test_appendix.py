"""
附录数据核验测试
"""

from dataclasses import replace

import pytest

from appendix import CASES, find_case, verify_appendix, verify_case


@pytest.mark.parametrize("scalar", ["quadratic", "f64"])
def test_all_cases_pass(scalar):
    reports = verify_appendix(scalar)
    assert [r.name for r in reports] == ["K5-e", "H1", "H2"]
    for report in reports:
        assert report.passed, report.to_dict()


def test_ranks():
    expected = {"K5-e": (13, 9), "H1": (16, 12), "H2": (19, 15)}
    for case in CASES:
        values = verify_case(case).values
        assert (values["rigidity_rank"], values["stress_rank"]) == expected[case.name]
        assert values["max_residual"] == 0


def test_corrupted_data_fails_residual():
    for report in verify_appendix(corrupt=True):
        assert not report.passed
        assert "residual" in report.failures


def test_unbalanced_stress_values_are_detected():
    h1 = find_case("H1")
    omega = list(h1.omega)
    omega[4] = "-260/441"
    assert "residual" in verify_case(replace(h1, omega=tuple(omega))).failures

    h2 = find_case("H2")
    lam = list(h2.lam)
    lam[3] = "269/105-253/105*s"
    assert "residual" in verify_case(replace(h2, lam=tuple(lam))).failures


def test_find_case():
    assert find_case("H2").framework().n == 7
    with pytest.raises(KeyError):
        find_case("K4")
