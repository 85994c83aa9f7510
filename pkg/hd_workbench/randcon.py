#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
alpha-random subsets of [n]^k, deletion of collinear u-tuples, the two expectation
conditions of the construction and exact independent-set search at desk scale

PRNG contract: numpy.random.default_rng(seed) (PCG64); one uniform draw per
point in lexicographic order, the point is kept iff draw < alpha.

@time  : 2026/10/13 10:12
"""
import math
import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats
from scipy.special import logsumexp

from hd_workbench.errors import DomainError
from hd_workbench.grid_core import GridSpec, Point, collinear_groups, count_collinear_tuples
from hd_workbench.param_plan import ParameterPlan
from hd_workbench.search import PackingSearch
from utils.common import hash_points

logger = logging.getLogger(__name__)

PRNG_NAME = 'numpy.PCG64'
NORMAL_APPROX_THRESHOLD = 1000000


@dataclass(frozen=True)
class RandomSubsetRun(object):
    grid: GridSpec
    alpha: float
    seed: int
    u: int
    sample: Tuple[Point, ...]
    deleted: Tuple[Point, ...]
    survivors: Tuple[Point, ...]

    def to_json(self):
        return {
            'grid': self.grid.to_json(),
            'alpha': self.alpha,
            'seed': self.seed,
            'u': self.u,
            'prng': PRNG_NAME,
            'sample': [list(p) for p in self.sample],
            'deleted': [list(p) for p in self.deleted],
            'survivors': [list(p) for p in self.survivors],
            'survivors_hash': hash_points(self.survivors),
        }

    @classmethod
    def from_json(cls, obj):
        def _pts(key):
            return tuple(tuple(int(x) for x in p) for p in obj[key])
        return cls(grid=GridSpec.from_json(obj['grid']), alpha=float(obj['alpha']), seed=int(obj['seed']),
                   u=int(obj['u']), sample=_pts('sample'), deleted=_pts('deleted'), survivors=_pts('survivors'))


@dataclass(frozen=True)
class IndependentSetResult(object):
    status: str
    witness: Optional[Tuple[Point, ...]]
    best_size: int
    upper_bound: int
    nodes: int

    def to_json(self):
        return {
            'status': self.status,
            'witness': [list(p) for p in self.witness] if self.witness is not None else None,
            'best_size': self.best_size,
            'upper_bound': self.upper_bound,
            'nodes': self.nodes,
        }


@dataclass(frozen=True)
class SignedLog(object):
    """real number sign * exp(log_abs); log_abs = inf with sign -1 is -infinity"""
    sign: int
    log_abs: float

    @property
    def tag(self):
        return 'nested-log'

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log_abs > 700:
            return self.sign * float('inf')
        return self.sign * math.exp(self.log_abs)

    def to_json(self):
        return {'sign': self.sign, 'log_abs': self.log_abs, 'tag': self.tag}


@dataclass(frozen=True)
class UTupleReport(object):
    log_expected: float
    log_alpha_volume: float
    difference: float
    precondition_ok: bool

    def to_json(self):
        return dict(self.__dict__)


@dataclass(frozen=True)
class TailReport(object):
    point_count: int
    alpha: float
    threshold: float
    probability: float
    approximated: bool

    def to_json(self):
        return dict(self.__dict__)


def sample_subset(grid: GridSpec, alpha, seed: int) -> List[Point]:
    """each grid point kept independently with probability alpha"""
    alpha = float(alpha)
    if not 0 <= alpha <= 1:
        raise DomainError('alpha must lie in [0, 1], got {}'.format(alpha))
    rng = np.random.default_rng(seed)
    draws = rng.random(grid.point_count)
    keep = np.nonzero(draws < alpha)[0]
    pts = grid.as_array()[keep]
    return [tuple(p) for p in pts.tolist()]


def delete_collinear_u_tuples(sample: Sequence[Point], u: int) -> Tuple[List[Point], List[Point]]:
    """
    Greedy per-line excess removal until no line holds u points. Lines by
    (excess descending, group order); the largest points of a line go first.
    """
    if u < 3:
        raise DomainError('u must be >= 3, got {}'.format(u))
    alive = set(tuple(p) for p in sample)
    deleted = []
    while True:
        lines = collinear_groups(alive, min_count=u)
        if not lines:
            break
        lines.sort(key=lambda g: (-(len(g) - (u - 1)), g))
        for group in lines:
            on_line = sorted((p for p in group if p in alive), reverse=True)
            excess = len(on_line) - (u - 1)
            for p in on_line[:max(0, excess)]:
                alive.discard(p)
                deleted.append(p)
    return sorted(alive), sorted(deleted)


def verify_no_u_collinear(points: Sequence[Point], u: int) -> bool:
    return not collinear_groups(points, min_count=u)


def count_tuples_in_subset(points: Sequence[Point], u: int) -> int:
    """collinear u-tuples inside an arbitrary point set"""
    return sum(math.comb(len(g), u) for g in collinear_groups(points, min_count=u))


def run_construction(grid: GridSpec, alpha, seed: int, u: int) -> RandomSubsetRun:
    logger.info('***** Running construction n=%d k=%d alpha=%s seed=%d u=%d *****',
                grid.n, grid.k, alpha, seed, u)
    sample = sample_subset(grid, alpha, seed)
    survivors, deleted = delete_collinear_u_tuples(sample, u)
    run = RandomSubsetRun(grid=grid, alpha=float(alpha), seed=seed, u=u, sample=tuple(sample),
                          deleted=tuple(deleted), survivors=tuple(survivors))
    assert verify_no_u_collinear(run.survivors, u), 'survivors still carry %d collinear points' % u
    assert set(run.survivors) == set(run.sample) - set(run.deleted)
    logger.info('sample %d, deleted %d, survivors %d', len(sample), len(deleted), len(survivors))
    return run


def exact_expected_u_tuples(grid: GridSpec, u: int, alpha):
    """sum over lines of C(count, u) alpha^u, exact for rational alpha"""
    total = count_collinear_tuples(grid, u)
    if isinstance(alpha, (int, Fraction)):
        return total * Fraction(alpha) ** u
    return total * float(alpha) ** u


def sample_size_tail(grid: GridSpec, alpha, threshold: int = NORMAL_APPROX_THRESHOLD) -> TailReport:
    """P(|S~| >= alpha N / 2), exact binomial tail up to `threshold` points"""
    big_n = grid.point_count
    alpha = float(alpha)
    bound = alpha * big_n / 2
    cut = math.ceil(bound)
    if big_n <= threshold:
        prob = float(stats.binom.sf(cut - 1, big_n, alpha))
        approximated = False
    else:
        mu = big_n * alpha
        sigma = math.sqrt(big_n * alpha * (1 - alpha))
        prob = float(stats.norm.sf((cut - 0.5 - mu) / sigma)) if sigma > 0 else float(cut <= mu)
        approximated = True
        logger.warning('normal approximation used for the sample-size tail, N=%d', big_n)
    return TailReport(point_count=big_n, alpha=alpha, threshold=bound, probability=prob, approximated=approximated)


def _log_of(value, log_value, name):
    if log_value is not None:
        return float(log_value)
    if value is None:
        raise DomainError('need {0} or log_{0}'.format(name))
    value = float(value)
    return math.log(value) if value > 0 else float('-inf')


def expected_independent_sets_log(n=None, k=4, q=3, p=None, alpha=None, s0=0.5, f=0.0,
                                  log_n=None, log_p=None, log_alpha=None) -> SignedLog:
    """
    log of exp(n^{k-s0-(k-ks0)/(q-1)+0.3f}) * (e n^{k-s0+0.1f} / p)^p * alpha^p,
    i.e. n^E + p (1 + (k-s0+0.1f) log n - log p + log alpha), as a signed log
    """
    L = _log_of(n, log_n, 'n')
    P = _log_of(p, log_p, 'p')
    A = _log_of(alpha, log_alpha, 'alpha')
    if A == float('-inf') and P > float('-inf'):
        return SignedLog(-1, float('inf'))
    exponent = k - s0 - (k - k * s0) / (q - 1) + 0.3 * f
    c = 1 + (k - s0 + 0.1 * f) * L - P + A
    terms, signs = [exponent * L], [1.0]
    if c != 0:
        terms.append(P + math.log(abs(c)))
        signs.append(math.copysign(1.0, c))
    log_abs, sign = logsumexp(np.array(terms), b=np.array(signs), return_sign=True)
    return SignedLog(int(sign), float(log_abs))


def expected_u_tuples_log(n=None, k=4, u=5, alpha=None, log_n=None, log_alpha=None) -> UTupleReport:
    """
    log of (k 2^{u+k}/u!) n^{u+k-1} log n alpha^u against log(alpha n^k);
    a negative difference points the condition the right way at this scale
    """
    L = _log_of(n, log_n, 'n')
    A = _log_of(alpha, log_alpha, 'alpha')
    ok = u >= k + 1
    if not ok:
        logger.warning('u=%d < k+1=%d: the collinear tuple bound does not apply', u, k + 1)
    const = math.log(k) + (u + k) * math.log(2) - math.lgamma(u + 1)
    lhs = const + (u + k - 1) * L + math.log(L) + u * A
    rhs = A + k * L
    diff = const + (u - 1) * L + math.log(L) + (u - 1) * A
    return UTupleReport(log_expected=lhs, log_alpha_volume=rhs, difference=diff, precondition_ok=ok)


def condition_one_sign(plan: ParameterPlan, log_n: float) -> SignedLog:
    """the independent-set expectation at the plan's alpha = n^{alpha_exp}, p = n^{p_exp}"""
    return expected_independent_sets_log(k=plan.k, q=plan.q, s0=float(plan.s0), f=float(plan.f),
                                         log_n=log_n, log_p=float(plan.p_exp) * log_n,
                                         log_alpha=float(plan.alpha_exp) * log_n)


def condition_one_threshold(plan: ParameterPlan, log_n_cap: float = 1e6) -> Optional[float]:
    """smallest log n (to 1e-9 relative) from which the plan's expectation log is negative"""
    lo, hi = 1.0, 2.0
    while condition_one_sign(plan, hi).sign >= 0:
        lo, hi = hi, hi * 2
        if hi > log_n_cap:
            return None
    while hi - lo > 1e-9 * hi:
        mid = (lo + hi) / 2
        if condition_one_sign(plan, mid).sign < 0:
            hi = mid
        else:
            lo = mid
    return hi


def find_independent_set(points: Sequence[Point], q: int, p: int, budget: int = 200000) -> IndependentSetResult:
    """
    a p-subset with at most q-1 points on every line ('witness'), proof that none
    exists ('certificate'), or 'unknown' when the node budget runs out
    """
    if q < 3:
        raise DomainError('q must be >= 3, got {}'.format(q))
    if p < 0:
        raise DomainError('p must be non-negative, got {}'.format(p))
    pts = sorted(set(tuple(pt) for pt in points))
    index = {pt: i for i, pt in enumerate(pts)}
    blocks = [[index[pt] for pt in g] for g in collinear_groups(pts, min_count=q)]
    outcome = PackingSearch(len(pts), blocks, capacity=q - 1, budget=budget).run(target=p)
    best = [pts[i] for i in outcome.best]
    if len(best) >= p:
        witness = tuple(sorted(best)[:p])
        assert verify_no_u_collinear(witness, q), 'witness carries %d collinear points' % q
        return IndependentSetResult('witness', witness, len(best), outcome.upper_bound, outcome.nodes)
    if outcome.optimal:
        return IndependentSetResult('certificate', None, len(best), len(best), outcome.nodes)
    return IndependentSetResult('unknown', None, len(best), outcome.upper_bound, outcome.nodes)
