#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
Delta(H, tau), the container hypotheses and the independent-set ledger

@time  : 2026/10/16 21:14
"""
import math
from fractions import Fraction

import mpmath
import pytest
from pytest import approx

from hd_workbench.container_bounds import (ContainerParams, check_container_hypotheses, container_count_log_bound,
                                           delta_H_tau, exponent_slope_in_s0, general_case_tau_exponent,
                                           independent_set_count_log_bound, independent_set_exponent,
                                           per_step_container_log_bound, step_ledger, validate_count_hypotheses)
from hd_workbench.errors import DomainError, HypothesisError
from hd_workbench.grid_core import GridSpec, collinear_stats


def _params(tau, epsilon=Fraction(1, 10), delta=None, d=Fraction(8, 3), N=9):
    return ContainerParams(r=3, N=N, d=d, delta=delta if delta is not None else {2: 1, 3: 1},
                           tau=tau, epsilon=epsilon)


def test_delta_h_tau_hand_value():
    assert delta_H_tau(_params(Fraction(1, 2))) == Fraction(6)
    assert delta_H_tau(_params(Fraction(1, 2), delta={2: 0, 3: 0})) == 0


def test_delta_h_tau_from_grid_stats():
    stats = collinear_stats(GridSpec(3, 2), 3)
    params = ContainerParams.from_stats(stats, 9, Fraction(1, 2), Fraction(1, 10))
    assert delta_H_tau(params) == 6


def test_delta_h_tau_domain():
    with pytest.raises(DomainError):
        delta_H_tau(_params(Fraction(1)))
    with pytest.raises(DomainError):
        delta_H_tau(_params(Fraction(1, 2), d=0))


def test_c_r():
    assert _params(Fraction(1, 2)).c_r == 1296000


def test_hypothesis_thresholds():
    report = check_container_hypotheses(_params(0.5, epsilon=0.1))
    assert not report.tau_ok
    assert not report.ok
    assert report.delta_threshold == approx(0.1 / 72)
    assert check_container_hypotheses(_params(Fraction(1, 2))).tau_threshold == Fraction(1, 21600)


def test_hypotheses_monotone_in_tau_and_delta():
    taus = [Fraction(1, 10 ** j) for j in range(1, 9)]
    passed = [check_container_hypotheses(_params(t)).tau_ok for t in taus]
    # once the first check passes, smaller tau keeps it passing
    assert passed == sorted(passed)
    tau = Fraction(1, 10 ** 5)
    deltas = [{2: 100 - j, 3: 100 - j} for j in range(100)]
    delta_passed = [check_container_hypotheses(_params(tau, delta=d)).delta_ok for d in deltas]
    assert delta_passed == sorted(delta_passed)


def test_container_count_formula_only():
    params = _params(1 / math.e, epsilon=1 / math.e, N=1)
    assert container_count_log_bound(params, strict=False) == approx(1296000 / math.e, rel=1e-12)
    assert container_count_log_bound(params, strict=False) == approx(476763.5, abs=0.1)
    with pytest.raises(HypothesisError):
        container_count_log_bound(params, strict=True)


def test_container_count_vanishes_with_tau():
    values = [container_count_log_bound(_params(10.0 ** -j, epsilon=0.25), strict=False) for j in (4, 8, 16)]
    assert values[0] > values[1] > values[2] > 0
    assert values[2] < 1e-6


def test_independent_set_exponent_and_slope():
    assert independent_set_exponent(4, 3, 0.5, 0.025) == approx(2.5075)
    assert exponent_slope_in_s0(4, 3) == 1
    assert exponent_slope_in_s0(2, 3) == 0
    assert exponent_slope_in_s0(2, 4) == Fraction(-1, 3)
    # slope sign agrees with a finite difference
    h = 1e-6
    diff = (independent_set_exponent(5, 3, 0.5 + h, 0.01) - independent_set_exponent(5, 3, 0.5, 0.01)) / h
    assert diff == approx(float(exponent_slope_in_s0(5, 3)), rel=1e-6)


def test_count_hypotheses_condition_two_at_desk_scale():
    report = validate_count_hypotheses(n=10 ** 6, k=4, r=3, s0=0.5, f=0.025)
    by_name = {c.name: c for c in report.conditions}
    L = math.log(10 ** 6)
    assert by_name['f_floor'].rhs == approx(1e4 * math.log(L) / L)
    assert by_name['f_floor'].rhs == approx(1900.6, abs=0.1)
    assert not by_name['f_floor'].ok
    assert by_name['ordering'].ok
    assert by_name['s0_cap'].ok
    assert not report.ok


def test_count_hypotheses_passes_for_huge_n():
    report = validate_count_hypotheses(k=4, r=3, s0=Fraction(1, 2), f=Fraction(1, 40), log_n=1e12)
    assert report.ok


def test_count_hypotheses_rejects_tiny_n():
    with pytest.raises(DomainError):
        validate_count_hypotheses(n=2, k=4, r=3)


def test_independent_set_count_m_zero():
    small = independent_set_count_log_bound(log_n=10.0, k=4, r=3, s0=0.5, f=0.025, m=0)
    assert small.depth == 1
    assert small.value == approx(math.exp(2.5075 * 10.0))

    huge = independent_set_count_log_bound(log_n=1e6, k=4, r=3, s0=0.5, f=0.025, m=0)
    assert huge.depth == 2
    assert huge.tag == 'nested-log'
    assert huge.value == approx(2.5075e6)


def test_independent_set_count_with_binomial():
    mpmath.mp.dps = 40
    L, m = 3.0, 5
    value = independent_set_count_log_bound(log_n=L, k=4, r=3, s0=0.5, f=0.025, m=m)
    big_n = mpmath.exp((4 - 0.5 + 0.0025) * mpmath.mpf(L))
    expected = mpmath.exp(mpmath.mpf(2.5075) * L) + mpmath.log(mpmath.binomial(big_n, m))
    assert value.value == approx(float(expected), rel=1e-9)


def test_independent_set_count_strict():
    with pytest.raises(HypothesisError):
        independent_set_count_log_bound(n=10 ** 6, k=4, r=3, s0=0.5, f=0.025, m=0, strict=True)
    with pytest.raises(DomainError):
        independent_set_count_log_bound(n=10 ** 6, m=-1)


def test_step_ledger_cap():
    ledger = step_ledger(Fraction(1, 2), Fraction(1, 40), k=4)
    assert ledger.steps_max == 1600
    assert ledger.steps_exact <= ledger.steps_max
    ledger = step_ledger(Fraction(1, 2), Fraction(1, 10), k=4)
    expected = (5 * (Fraction(1, 2) - Fraction(1, 100)) + Fraction(2, 100) * Fraction(4, 10)) / (Fraction(5, 100) * Fraction(4, 10))
    assert ledger.steps_exact == expected
    assert ledger.steps_exact <= 400


@pytest.mark.parametrize('f', [Fraction(1, 10), Fraction(1, 100), Fraction(1, 10 ** 4)])
@pytest.mark.parametrize('k', [3, 4, 8])
def test_step_ledger_cap_near_s0_limit(f, k):
    ledger = step_ledger(Fraction(9, 10), f, k=k)
    assert ledger.steps_exact <= 40 / f


# 10 x 10 x 10 points over s0 in (0, 0.9], f in (0, 1/4], k >= 3
S0_GRID = [Fraction(1, 20)] + [Fraction(j, 10) for j in range(1, 10)]
F_GRID = [Fraction(j, 40) for j in range(1, 11)]


@pytest.mark.parametrize('k', range(3, 13))
def test_step_ledger_over_grid(k):
    for s0 in S0_GRID:
        for f in F_GRID:
            ledger = step_ledger(s0, f, k=k, r=3, log_n=1e6)
            assert ledger.steps_max == 40 / f
            assert 0 < ledger.steps_exact <= ledger.steps_max
            step = per_step_container_log_bound(k, 3, float(s0), float(f), 1e6)
            assert len(ledger.per_step) == max(1, math.ceil(ledger.steps_exact))
            assert all(v == step for v in ledger.per_step)
            assert ledger.total.value <= math.log(float(ledger.steps_max)) + step.value + 1e-9


def test_step_ledger_totals():
    ledger = step_ledger(0.5, 0.025, k=4, r=3, log_n=1e6)
    assert len(ledger.per_step) == math.ceil(ledger.steps_exact)
    step = per_step_container_log_bound(4, 3, 0.5, 0.025, 1e6)
    assert ledger.total.value == approx(step.value + math.log(len(ledger.per_step)))
    assert ledger.total.value <= math.log(float(ledger.steps_max)) + step.value
    assert ledger.tau_exponent == approx(-1.0)


def test_step_ledger_rejects_non_positive_f():
    with pytest.raises(DomainError):
        step_ledger(0.5, 0)


def test_general_case_tau_flag():
    exponent, flagged = general_case_tau_exponent(4, 3, 0.5, 0.025, 0.1)
    assert exponent == approx(-1.0 - (0.5 - 0.0025 + 0.1))
    assert not flagged
    exponent, flagged = general_case_tau_exponent(2, 3, 0.9, 0.5, -1.0)
    assert flagged
