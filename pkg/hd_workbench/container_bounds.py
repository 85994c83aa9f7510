#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
numeric bookkeeping around the hypergraph container theorem: Delta(H, tau),
its two hypotheses, container-count bounds, the independent-set count bound
and the step ledger of the repeated application.

Quantities here are doubly exponential in log n, so every bound is returned
as a log (LogValue depth 1) or a log of a log (depth 2).

@time  : 2026/10/11 16:40
"""
import math
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from hd_workbench.errors import DomainError, HypothesisError
from hd_workbench.grid_core import CollinearStats
from utils.math_util import LogValue, MathUtil

logger = logging.getLogger(__name__)

Real = Union[Fraction, float, int]

# repeated application stops once containers reach n^{k-s0+0.1f}
CONTAINER_SIZE_SLACK = 0.1


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def _is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


@dataclass(frozen=True)
class ContainerParams(object):
    r: int
    N: int
    d: Real
    delta: Dict[int, Real]
    tau: Real
    epsilon: Real

    @property
    def c_r(self) -> int:
        return 2000 * self.r * math.factorial(self.r) ** 3

    @classmethod
    def from_stats(cls, stats: CollinearStats, N: int, tau, epsilon):
        return cls(r=stats.r, N=N, d=stats.avg_degree, delta=dict(stats.codegree_max),
                   tau=tau, epsilon=epsilon)


@dataclass(frozen=True)
class HypothesisReport(object):
    tau: Real
    tau_threshold: Fraction
    tau_ok: bool
    delta_value: Real
    delta_threshold: Real
    delta_ok: bool
    range_ok: bool

    @property
    def ok(self):
        return self.tau_ok and self.delta_ok and self.range_ok

    def to_json(self):
        return {
            'tau': float(self.tau),
            'tau_threshold': float(self.tau_threshold),
            'tau_ok': self.tau_ok,
            'delta_value': float(self.delta_value),
            'delta_threshold': float(self.delta_threshold),
            'delta_ok': self.delta_ok,
            'range_ok': self.range_ok,
            'ok': self.ok,
        }


@dataclass(frozen=True)
class Condition(object):
    name: str
    lhs: float
    rhs: float
    ok: bool

    def to_json(self):
        return {'name': self.name, 'lhs': self.lhs, 'rhs': self.rhs, 'ok': self.ok}


@dataclass(frozen=True)
class CountHypothesisReport(object):
    log_n: float
    conditions: Tuple[Condition, ...]

    @property
    def ok(self):
        return all(c.ok for c in self.conditions)

    def to_json(self):
        return {'log_n': self.log_n, 'conditions': [c.to_json() for c in self.conditions], 'ok': self.ok}


@dataclass(frozen=True)
class BoundLedger(object):
    s0: float
    f: float
    k: int
    steps_exact: Fraction
    steps_max: Fraction
    tau_exponent: float = None
    epsilon_exponent: float = None
    per_step: Tuple[LogValue, ...] = ()
    total: LogValue = None

    def to_json(self):
        return {
            's0': self.s0, 'f': self.f, 'k': self.k,
            'steps_exact': float(self.steps_exact),
            'steps_max': float(self.steps_max),
            'tau_exponent': self.tau_exponent,
            'epsilon_exponent': self.epsilon_exponent,
            'per_step_count': len(self.per_step),
            'per_step': self.per_step[0].to_json() if self.per_step else None,
            'total': self.total.to_json() if self.total else None,
        }


def delta_H_tau(params: ContainerParams) -> Real:
    """
    Delta(H, tau) = 2^{C(r,2)-1} sum_{j=2}^r Delta_j / (d tau^{j-1} 2^{C(j-1,2)});
    exact when d, tau and the co-degrees are rational
    """
    d, tau = params.d, params.tau
    if d <= 0:
        raise DomainError('average degree must be positive, got {}'.format(d))
    if not 0 < tau < 1:
        raise DomainError('tau must lie in (0, 1), got {}'.format(tau))
    r = params.r
    exact = _is_exact(d, tau, *params.delta.values())
    if exact:
        d, tau = Fraction(d), Fraction(tau)
        total = Fraction(0)
    else:
        d, tau = float(d), float(tau)
        total = 0.0
    for j in range(2, r + 1):
        dj = params.delta.get(j, 0)
        if not dj:
            continue
        total += dj / (d * tau ** (j - 1) * 2 ** math.comb(j - 1, 2))
    return 2 ** (math.comb(r, 2) - 1) * total


def check_container_hypotheses(params: ContainerParams) -> HypothesisReport:
    """tau < 1/(200 r (r!)^2) and Delta(H, tau) <= eps/(12 r!), with 0 < eps, tau < 1/2"""
    r = params.r
    tau_threshold = Fraction(1, 200 * r * math.factorial(r) ** 2)
    value = delta_H_tau(params)
    if _is_exact(params.epsilon):
        delta_threshold = Fraction(params.epsilon) / (12 * math.factorial(r))
    else:
        delta_threshold = float(params.epsilon) / (12 * math.factorial(r))
    range_ok = 0 < params.epsilon < 0.5 and 0 < params.tau < 0.5
    return HypothesisReport(tau=params.tau,
                            tau_threshold=tau_threshold,
                            tau_ok=params.tau < tau_threshold,
                            delta_value=value,
                            delta_threshold=delta_threshold,
                            delta_ok=value <= delta_threshold,
                            range_ok=range_ok)


def container_count_log_bound(params: ContainerParams, strict: bool = True) -> float:
    """log |C| <= c_r N tau log(1/eps) log(1/tau)"""
    report = check_container_hypotheses(params)
    if not report.ok:
        if strict:
            raise HypothesisError('container hypotheses fail: {}'.format(report.to_json()))
        logger.warning('container hypotheses unmet, formula value only')
    tau, eps = float(params.tau), float(params.epsilon)
    return params.c_r * params.N * tau * math.log(1 / eps) * math.log(1 / tau)


def independent_set_exponent(k, r, s0, f) -> float:
    """k - s0 - (k - k s0)/(r-1) + 0.3f"""
    return k - s0 - (k - k * s0) / (r - 1) + 0.3 * f


def exponent_slope_in_s0(k, r) -> Fraction:
    """
    d/ds0 of the exponent above, k/(r-1) - 1; positive exactly when k > r-1,
    so raising s0 raises the exponent in that regime
    """
    return Fraction(k, r - 1) - 1


def extremal_tau_exponent(k, r, s0) -> float:
    """tau = n^{(k s0 - k)/(r-1)} in the extremal case s = s0 - 0.1f"""
    return (k * s0 - k) / (r - 1)


def general_case_tau_exponent(k, r, s0, f, s) -> Tuple[float, bool]:
    """
    tau = n^{(k s0 - k)/(r-1) - (s0 - 0.1f + s)} taken as written; the flag marks
    n tau > 1, where the first summand no longer dominates
    """
    exponent = extremal_tau_exponent(k, r, s0) - (s0 - 0.1 * f + s)
    n_tau_above_one = exponent > -1
    if n_tau_above_one:
        logger.warning('general-case tau exponent %.6g > -1: n*tau > 1 regime', exponent)
    return exponent, n_tau_above_one


def _log_n(n, log_n) -> float:
    if log_n is None:
        if n is None or n <= 1:
            raise DomainError('need n > 1 or log_n')
        log_n = math.log(n)
    return float(log_n)


def validate_count_hypotheses(n=None, k=4, r=3, s0=0.5, f=0.025, log_n: float = None) -> CountHypothesisReport:
    """
    0 < f < s0 < 0.9 plus
    (1) s0 <= (k-r+1)/k, (2) f >= 10^4 loglog n / log n, (3) k <= 0.001 f log n / loglog n
    """
    L = _log_n(n, log_n)
    if L <= 1:
        raise DomainError('log log n is undefined or negative for log n = {}'.format(L))
    LL = math.log(L)
    cond1_rhs = Fraction(k - r + 1, k)
    conditions = (
        Condition('ordering', float(f), float(s0), 0 < f < s0 < 0.9),
        Condition('s0_cap', float(s0), float(cond1_rhs), _frac(s0) <= cond1_rhs),
        Condition('f_floor', float(f), 1e4 * LL / L, f >= 1e4 * LL / L),
        Condition('k_cap', float(k), 0.001 * f * L / LL, k <= 0.001 * f * L / LL),
    )
    report = CountHypothesisReport(log_n=L, conditions=conditions)
    for c in conditions:
        if not c.ok:
            logger.info('condition %s fails: lhs=%.6g rhs=%.6g', c.name, c.lhs, c.rhs)
    return report


def independent_set_count_log_bound(n=None, k=4, r=3, s0=0.5, f=0.025, m=0, log_n: float = None,
                                    strict: bool = False) -> LogValue:
    """
    log of exp(n^{k-s0-(k-ks0)/(r-1)+0.3f}) * C(n^{k-s0+0.1f}, m),
    nested (depth 2) once n^{...} no longer fits a double
    """
    if m < 0:
        raise DomainError('m must be non-negative, got {}'.format(m))
    L = _log_n(n, log_n)
    if strict:
        report = validate_count_hypotheses(k=k, r=r, s0=s0, f=f, log_n=L)
        if not report.ok:
            raise HypothesisError('independent set bound hypotheses fail: {}'.format(report.to_json()))
    x = independent_set_exponent(k, r, s0, f) * L
    y = MathUtil.log_binom_from_log((k - s0 + CONTAINER_SIZE_SLACK * f) * L, m)
    return MathUtil.log_exp_plus(x, y)


def per_step_container_log_bound(k, r, s0, f, log_n: float) -> LogValue:
    """
    log log of one application's container count with N = n^{k-s0+0.1f},
    tau = n^{(ks0-k)/(r-1)}, eps = n^{-0.05fk}
    """
    if not 0 <= s0 < 1:
        raise DomainError('s0 must lie in [0, 1), got {}'.format(s0))
    c_r = 2000 * r * math.factorial(r) ** 3
    tau_exp = extremal_tau_exponent(k, r, s0)
    parts = [
        math.log(c_r),
        (k - s0 + CONTAINER_SIZE_SLACK * f) * log_n,
        tau_exp * log_n,
        math.log(0.05 * f * k * log_n),
        math.log(-tau_exp * log_n),
    ]
    return LogValue(math.fsum(parts), depth=2)


def step_ledger(s0, f, k: int = 3, r: int = None, log_n: float = None) -> BoundLedger:
    """
    exact step count ((k+1)(s0-0.1f)+0.02fk)/(0.05fk) against the 40/f cap, and when
    r and log n are given the per-step and total container log-log counts
    """
    if f <= 0:
        raise DomainError('f must be positive, got {}'.format(f))
    fs, ff = _frac(s0), _frac(f)
    steps_exact = ((k + 1) * (fs - ff / 10) + Fraction(2, 100) * ff * k) / (Fraction(5, 100) * ff * k)
    steps_max = 40 / ff
    if fs <= Fraction(9, 10) and k >= 3:
        assert steps_exact <= steps_max, 'step count %s exceeds 40/f = %s' % (steps_exact, steps_max)
    if r is None or log_n is None:
        return BoundLedger(s0=float(s0), f=float(f), k=k, steps_exact=steps_exact, steps_max=steps_max)

    step = per_step_container_log_bound(k, r, float(s0), float(f), log_n)
    n_steps = max(1, math.ceil(steps_exact))
    per_step = tuple(step for _ in range(n_steps))
    total = LogValue(float(logsumexp(np.array([v.value for v in per_step]))), depth=2)
    assert total.value <= math.log(max(float(steps_max), n_steps)) + step.value + 1e-9, \
        'ledger total exceeds log(40/f) + per-step value'
    return BoundLedger(s0=float(s0), f=float(f), k=k, steps_exact=steps_exact, steps_max=steps_max,
                       tau_exponent=extremal_tau_exponent(k, r, float(s0)),
                       epsilon_exponent=-0.05 * float(f) * k,
                       per_step=per_step, total=total)
