#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
closed-form parameter optimizer: for (q, eta) choose k, s0, beta, f, alpha, p, u and
the target exponent T, and certify every optimality claim numerically.

Closed-form targets are exact rationals (Fraction); only the log-based
feasibility thresholds are floats.

@time  : 2026/10/12 09:26
"""
import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from hd_workbench.errors import DomainError
from utils.math_util import EXP_OVERFLOW

logger = logging.getLogger(__name__)

SWEEP_TOL = 1e-12
ETA_MAX = Fraction(1, 2)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def _check_q_eta(q, eta):
    if not isinstance(q, int) or q < 3:
        raise DomainError('q must be an integer >= 3, got {}'.format(q))
    eta = _frac(eta)
    if not 0 < eta < ETA_MAX:
        raise DomainError('eta must lie in (0, 1/2), got {}'.format(eta))
    return eta


def _log_threshold(target: float) -> float:
    """smallest x > e with x / log x >= target, by bisection (x / log x increases past e)"""
    lo, hi = math.e, max(2 * math.e, 2.0)
    if lo / math.log(lo) >= target:
        return lo
    while hi / math.log(hi) < target:
        lo, hi = hi, hi * 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid / math.log(mid) >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= SWEEP_TOL * hi:
            break
    return hi


@dataclass(frozen=True)
class ParameterPlan(object):
    q: int
    eta: Fraction
    k: int
    s0: Fraction
    beta: Fraction
    f: Fraction
    alpha_exp: Fraction
    p_exp: Fraction
    u: int
    T: Fraction
    T_floor: Fraction
    log_n_min: float
    variant: str = 'pq'
    # coloring plan, exponents in units of log m
    m_units: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def n_min(self) -> Optional[int]:
        """exact threshold when it fits, None otherwise (see log_n_min)"""
        if self.log_n_min >= EXP_OVERFLOW:
            return None
        return math.ceil(math.exp(self.log_n_min))

    def hypotheses_met(self, log_n: float) -> bool:
        return log_n >= self.log_n_min

    def to_json(self):
        obj = {
            'variant': self.variant,
            'q': self.q,
            'eta': str(self.eta),
            'k': self.k,
            's0': str(self.s0),
            'beta': str(self.beta),
            'f': str(self.f),
            'alpha_exp': str(self.alpha_exp),
            'p_exp': str(self.p_exp),
            'u': self.u,
            'T': str(self.T),
            'T_floor': str(self.T_floor),
            'log_n_min': self.log_n_min,
            'n_min': self.n_min,
        }
        if self.m_units:
            obj['m_units'] = {key: str(v) for key, v in sorted(self.m_units.items())}
        return obj

    @classmethod
    def from_json(cls, obj):
        return cls(q=int(obj['q']), eta=Fraction(obj['eta']), k=int(obj['k']),
                   s0=Fraction(obj['s0']), beta=Fraction(obj['beta']), f=Fraction(obj['f']),
                   alpha_exp=Fraction(obj['alpha_exp']), p_exp=Fraction(obj['p_exp']),
                   u=int(obj['u']), T=Fraction(obj['T']), T_floor=Fraction(obj['T_floor']),
                   log_n_min=float(obj['log_n_min']), variant=obj.get('variant', 'pq'),
                   m_units={key: Fraction(v) for key, v in obj.get('m_units', {}).items()})


@dataclass(frozen=True)
class SweepResult(object):
    q: int
    values: Dict[int, Fraction]
    argmax: Tuple[int, ...]
    max_value: Fraction
    unimodal: bool


@dataclass(frozen=True)
class SweepPoint(object):
    s0: Fraction
    p_exp: Fraction
    capped_target: Fraction
    margin: Fraction


@dataclass(frozen=True)
class S0SweepReport(object):
    q: int
    k: int
    boundary_T: Fraction
    points: Tuple[SweepPoint, ...]
    u_checks: Dict[int, bool]

    @property
    def ok(self):
        return all(pt.margin >= 0 for pt in self.points) and all(self.u_checks.values())


def target_T(k: int, q: int) -> Fraction:
    """T(k, q) = 1 + ((k-q+1)/k) / (k - (k-q+1)/k - 1)"""
    if k <= q - 1:
        raise DomainError('T(k, q) needs k > q-1, got k={}, q={}'.format(k, q))
    s0 = Fraction(k - q + 1, k)
    denom = k - s0 - 1
    if denom <= 0:
        raise DomainError('T(k, q) denominator is not positive for k={}, q={}'.format(k, q))
    return 1 + s0 / denom


def k_peak(q: int) -> float:
    """continuous maximiser (q-1) + sqrt((q-1)(q-2))"""
    return (q - 1) + math.sqrt((q - 1) * (q - 2))


def _unimodal(seq: Sequence) -> bool:
    peak = int(np.argmax([float(v) for v in seq]))
    rising = all(seq[i] <= seq[i + 1] for i in range(peak))
    falling = all(seq[i] >= seq[i + 1] for i in range(peak, len(seq) - 1))
    return rising and falling


def sweep_k(q: int, k_range: Iterable[int] = None) -> SweepResult:
    """exact T(k, q) over the integer range, default [q, 4q]"""
    ks = sorted(k_range) if k_range is not None else list(range(q, 4 * q + 1))
    values = {k: target_T(k, q) for k in ks if k > q - 1}
    best = max(values.values())
    argmax = tuple(k for k, v in values.items() if v == best)
    return SweepResult(q=q, values=values, argmax=argmax, max_value=best,
                       unimodal=_unimodal([values[k] for k in sorted(values)]))


def beta_feasible(k, q, s0, beta) -> Tuple[bool, Fraction]:
    """beta < (k - k s0)/(q-1); the boundary is minus the ideal alpha exponent"""
    boundary = (k - k * _frac(s0)) / (q - 1)
    return _frac(beta) < boundary, boundary


def error_term_target(q: int, f) -> Tuple[Fraction, bool]:
    """
    realized target with the error term, (2q-3-1.1f)/(2q-3.5+f), and whether it
    clears 1 + 1/(4q-7) - f
    """
    f = _frac(f)
    value = (2 * q - 3 - Fraction(11, 10) * f) / (2 * q - Fraction(7, 2) + f)
    return value, value >= 1 + Fraction(1, 4 * q - 7) - f


def log_p_min(q: int, eta) -> float:
    """log p needed for q <= 0.01 eta (log p / log log p)^{1/3}"""
    eta = _check_q_eta(q, eta)
    return _log_threshold((100 * q / float(eta)) ** 3)


def choose_parameters(q: int, eta) -> ParameterPlan:
    """k = 2q-2, s0 = 1/2, f = eta/(4q), alpha = n^{-1-f}, p = n^{2q-3.5+f}, u = 2q-1"""
    eta = _check_q_eta(q, eta)
    k = 2 * q - 2
    s0 = Fraction(k - q + 1, k)
    f = eta / (4 * q)
    # beta is taken on the boundary (k - k s0)/(q-1), alpha_exp = -beta - f
    _, beta = beta_feasible(k, q, s0, 0)
    plan = ParameterPlan(
        q=q, eta=eta, k=k, s0=s0, beta=beta, f=f,
        alpha_exp=-1 - f,
        p_exp=2 * q - Fraction(7, 2) + f,
        u=2 * q - 1,
        T=1 + Fraction(1, 4 * q - 7) - f,
        T_floor=1 + (1 - eta) / (4 * q - 7),
        # q <= 0.01 eta sqrt(log n / log log n)
        log_n_min=_log_threshold((100 * q / float(eta)) ** 2),
    )
    assert plan.s0 == Fraction(1, 2), 's0 = %s' % plan.s0
    assert plan.f < eta / (4 * q - 7), 'f = %s does not stay below eta/(4q-7)' % f
    assert plan.T >= plan.T_floor, 'T = %s below floor %s' % (plan.T, plan.T_floor)
    realized, clears = error_term_target(q, f)
    assert clears, 'realized target %s below 1+1/(4q-7)-f' % realized
    logger.debug('plan q=%d eta=%s: k=%d p_exp=%s T=%s log_n_min=%.6g', q, eta, k, plan.p_exp, plan.T,
                 plan.log_n_min)
    return plan


def s0_sweep(q: int, eta, s0_grid: Sequence = None, u_grid: Sequence[int] = None, points: int = 20) -> S0SweepReport:
    """
    for s0 beyond (k-q+1)/k the exponent p_exp(s0) = k - s0 - (k-ks0)/(q-1) only grows,
    so the capped target (k-1)/p_exp never beats T(2q-2, q) from the boundary choice.
    Without s0_grid, `points` evenly spaced values up to 0.9 are swept.
    """
    _check_q_eta(q, eta)
    k = 2 * q - 2
    boundary_s0 = Fraction(k - q + 1, k)
    if s0_grid is None:
        s0_grid = [boundary_s0 + (Fraction(9, 10) - boundary_s0) * i / points for i in range(1, points + 1)]
    u_grid = list(u_grid) if u_grid is not None else list(range(2, 4 * q + 1))
    boundary_T = target_T(k, q)
    sweep = []
    for s0 in s0_grid:
        s0 = _frac(s0)
        if not boundary_s0 < s0 <= Fraction(9, 10):
            raise DomainError('s0 = {} outside ((k-q+1)/k, 0.9]'.format(s0))
        p_exp = k - s0 - (k - k * s0) / (q - 1)
        capped = Fraction(k - 1) / p_exp
        sweep.append(SweepPoint(s0=s0, p_exp=p_exp, capped_target=capped, margin=boundary_T - capped))
    # alpha n <= u gives alpha/(4(u-1)) <= u/(4(u-1)) / n <= 1/n
    u_checks = {u: Fraction(u, 4 * (u - 1)) <= 1 for u in u_grid if u >= 2}
    return S0SweepReport(q=q, k=k, boundary_T=boundary_T, points=tuple(sweep), u_checks=u_checks)


def coloring_target(k: int, q: int) -> Fraction:
    """target under u = q+1: (k - k/q) / (k - (k-q+1)/k - 1)"""
    return (k - Fraction(k, q)) / (k - Fraction(k - q + 1, k) - 1)


def coloring_plan(q: int, eta) -> ParameterPlan:
    """
    k = q, u = q+1, f = eta/q^2, T = 1 + 1/(q^2-q-1). In units of log m the
    point set has size m, p = m^{(q^2-q-1)/(q^2-q-eta)} and chi > m^{(1-eta)/(q^2-q-eta)}.
    """
    eta = _check_q_eta(q, eta)
    k = q
    s0 = Fraction(1, q)
    f = eta / q ** 2
    _, beta = beta_feasible(k, q, s0, 0)
    c = q * q - q
    p_exp_m = Fraction(c - 1) / (c - eta)
    m_units = {
        'p_exp': p_exp_m,
        'chi_exp': (1 - eta) / (c - eta),
        'size_exp': p_exp_m * (1 + (1 - eta) / (c - 1)),
    }
    assert m_units['size_exp'] == 1, 'p^{1+(1-eta)/(q^2-q-1)} = m^%s' % m_units['size_exp']
    assert m_units['p_exp'] + m_units['chi_exp'] == 1
    plan = ParameterPlan(
        q=q, eta=eta, k=k, s0=s0, beta=beta, f=f,
        alpha_exp=-beta - f,
        p_exp=k - s0 - beta + f,
        u=q + 1,
        T=1 + Fraction(1, c - 1),
        T_floor=1 + (1 - eta) / (c - 1),
        # q <= 0.005 eta (log m / log log m)^{1/4}
        log_n_min=_log_threshold((200 * q / float(eta)) ** 4),
        variant='coloring',
        m_units=m_units,
    )
    return plan
