#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
explicit supersaturation witness: anchor box U, prime direction set V and the
line family L(u, v), plus the counting checks run against a vertex subset S

@time  : 2026/10/11 10:05
"""
import math
import logging
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from hd_workbench.errors import DomainError, PreconditionError
from hd_workbench.grid_core import GridSpec, Point, canonical_direction
from utils.math_util import LogValue, MathUtil

logger = logging.getLogger(__name__)

Real = Union[Fraction, float]

# relative tolerance on the interval endpoints when t is not rational
GUARD_BAND = 1e-12
# pi(m) >= m / log m only from here on
PRIME_LOWER_FROM = 17
S_MAX = Fraction(9, 10)


@dataclass(frozen=True)
class SupersatConfig(object):
    grid: GridSpec
    r: int
    s: Real
    c0: int
    t: Real
    exact: bool
    feasible: bool

    @classmethod
    def create(cls, n: int, k: int, r: int, s=0, t=None):
        """
        c0 = r*1000*9^k and t = c0*n^s unless t is given explicitly
        """
        if k < 2:
            raise DomainError('supersaturation family needs k >= 2, got k={}'.format(k))
        if r < 2:
            raise DomainError('r must be >= 2, got {}'.format(r))
        s_val = s if isinstance(s, (Fraction, float)) else Fraction(str(s))
        if not 0 <= s_val <= S_MAX:
            raise DomainError('s must lie in [0, 0.9], got {}'.format(s))
        grid = GridSpec(n, k)
        c0 = r * 1000 * 9 ** k
        if t is not None:
            t_val = t if isinstance(t, (Fraction, float)) else Fraction(str(t))
            if t_val <= 0:
                raise DomainError('t must be positive, got {}'.format(t))
            exact = isinstance(t_val, Fraction)
        elif s_val == 0:
            t_val, exact = Fraction(c0), True
        else:
            t_val, exact = c0 * float(n) ** float(s_val), False
        feasible = float(t_val) <= float(n) ** 0.99
        return cls(grid=grid, r=r, s=s_val, c0=c0, t=t_val, exact=exact, feasible=feasible)

    @property
    def n(self):
        return self.grid.n

    @property
    def k(self):
        return self.grid.k

    @property
    def span(self) -> Real:
        """2n/t, the admissible range of first coordinates"""
        return 2 * self.grid.n / self.t if self.exact else 2.0 * self.grid.n / float(self.t)

    def to_json(self):
        return {
            'n': self.n, 'k': self.k, 'r': self.r,
            's': str(self.s), 'c0': self.c0,
            't': str(self.t) if self.exact else float(self.t),
            't_tag': 'exact' if self.exact else 'float',
            'feasible': self.feasible,
        }


@dataclass(frozen=True)
class SupersatFamily(object):
    config: SupersatConfig
    anchors: Tuple[Point, ...]
    directions: Tuple[Point, ...]
    # (primitive direction, representative) pairs
    lines: Tuple[Tuple[Point, Point], ...]
    size_U: int
    size_V: int
    size_L: int
    direction_classes: int = 0
    _index: Dict[Point, frozenset] = field(default=None, repr=False, compare=False)

    def line_index(self) -> Dict[Point, frozenset]:
        """primitive direction -> set of representatives"""
        if self._index is None:
            index = defaultdict(set)
            for d, rep in self.lines:
                index[d].add(rep)
            object.__setattr__(self, '_index', {d: frozenset(reps) for d, reps in index.items()})
        return self._index

    def to_json(self):
        return {
            'config': self.config.to_json(),
            'size_U': self.size_U,
            'size_V': self.size_V,
            'size_L': self.size_L,
            'direction_classes': self.direction_classes,
            'size_L_bound': self.size_U * self.size_V,
        }


@dataclass(frozen=True)
class CoverageReport(object):
    counts: Dict[Point, int]
    min_count: int
    max_count: int
    required: int
    ok: bool

    def to_json(self):
        return {'min_count': self.min_count, 'max_count': self.max_count,
                'required': self.required, 'ok': self.ok}


@dataclass(frozen=True)
class SizeSandwich(object):
    applicable: bool
    size_V: int
    lower_middle: Optional[float]
    upper_middle: Optional[float]
    upper_simplified: Optional[float]
    upper_final: Optional[float]
    lower_final: Optional[float]

    @property
    def holds(self):
        if not self.applicable:
            return None
        return self.lower_middle <= self.size_V <= self.upper_middle

    def to_json(self):
        obj = dict(self.__dict__)
        obj['holds'] = self.holds
        return obj


@dataclass(frozen=True)
class SupersatBound(object):
    n_log: float
    k: int
    r: int
    s: float
    log_bound: LogValue
    hypotheses_met: bool

    def to_json(self):
        return {'log_n': self.n_log, 'k': self.k, 'r': self.r, 's': self.s,
                'log_bound': self.log_bound.to_json(), 'hypotheses_met': self.hypotheses_met}


def _in_range(p: int, lo: Real, hi: Real, exact: bool) -> bool:
    if exact:
        return lo <= p <= hi
    return lo * (1 - GUARD_BAND) <= p <= hi * (1 + GUARD_BAND)


def _prime_range(config: SupersatConfig) -> List[int]:
    """primes p with n/t <= p <= 2n/t"""
    hi = config.span
    lo = hi / 2
    top = math.floor(hi * (1 + GUARD_BAND)) if not config.exact else math.floor(hi)
    return [p for p in MathUtil.prime_sieve(top) if _in_range(p, lo, hi, config.exact)]


def build_direction_set(config: SupersatConfig) -> List[Point]:
    """
    vectors with prime first coordinate p in [n/t, 2n/t] and the remaining
    coordinates in [0, p), sorted
    """
    span = config.span
    if span < 2:
        raise PreconditionError('direction set needs 2n/t >= 2, got {}'.format(float(span)))
    if span < PRIME_LOWER_FROM:
        logger.warning('2n/t = %.4g < %d, the prime counting lower bound does not apply',
                       float(span), PRIME_LOWER_FROM)
    directions = []
    for p in _prime_range(config):
        for tail in itertools.product(range(p), repeat=config.k - 1):
            directions.append((p,) + tail)
    directions.sort()
    return directions


def anchor_count(config: SupersatConfig) -> int:
    return math.floor(config.span) * (2 * config.n + 1) ** (config.k - 1)


def build_anchor_set(config: SupersatConfig) -> List[Point]:
    """1 <= u_1 <= 2n/t, -n <= u_j <= n; empty when t > 2n"""
    n = config.n
    first = range(1, math.floor(config.span) + 1)
    rest = [range(-n, n + 1)] * (config.k - 1)
    return [tuple(u) for u in itertools.product(first, *rest)]


def direction_collisions(directions: Sequence[Point]) -> List[Tuple[Point, Point]]:
    """
    pairs v < v' of V spanning the same line direction. Prime first coordinates rule
    out every pair except multiples of the first axis vector.
    """
    by_class = defaultdict(list)
    for v in directions:
        by_class[canonical_direction(v)].append(tuple(v))
    pairs = []
    for members in by_class.values():
        members.sort()
        pairs.extend(itertools.combinations(members, 2))
    pairs.sort()
    return pairs


def _reps(points: np.ndarray, d: Point) -> np.ndarray:
    # every direction here has d[0] > 0
    dv = np.array(d, dtype=np.int64)
    shift = points[:, 0] // dv[0]
    return points - shift[:, None] * dv


def build_line_family(config: SupersatConfig, anchors: Sequence[Point] = None,
                      directions: Sequence[Point] = None) -> SupersatFamily:
    """all lines L(u, v), u in U, v in V, deduplicated in canonical form"""
    anchors = build_anchor_set(config) if anchors is None else [tuple(u) for u in anchors]
    directions = build_direction_set(config) if directions is None else [tuple(v) for v in directions]
    if not directions:
        raise PreconditionError('direction set is empty, no prime lies in [n/t, 2n/t]')

    lines = set()
    if anchors:
        u_arr = np.array(anchors, dtype=np.int64).reshape(-1, config.k)
        for d in sorted(set(canonical_direction(v) for v in directions)):
            for rep in np.unique(_reps(u_arr, d), axis=0).tolist():
                lines.add((d, tuple(rep)))
    lines = tuple(sorted(lines))
    classes = len(set(canonical_direction(v) for v in directions))
    family = SupersatFamily(config=config,
                            anchors=tuple(anchors),
                            directions=tuple(directions),
                            lines=lines,
                            size_U=len(anchors),
                            size_V=len(directions),
                            size_L=len(lines),
                            direction_classes=classes)
    assert family.size_L <= family.size_U * family.size_V, \
        'family has %d lines, more than |U||V| = %d' % (family.size_L, family.size_U * family.size_V)
    logger.info('supersat family n=%d k=%d t=%s: |U|=%d |V|=%d classes=%d |L|=%d',
                config.n, config.k, config.t, family.size_U, family.size_V, classes, family.size_L)
    return family


def _lines_through(points: np.ndarray, family: SupersatFamily) -> np.ndarray:
    """number of family lines through each row of points"""
    counts = np.zeros(len(points), dtype=np.int64)
    for d, reps in family.line_index().items():
        hit = [tuple(rep) in reps for rep in _reps(points, d).tolist()]
        counts += np.array(hit, dtype=np.int64)
    return counts


def _as_array(points, k) -> np.ndarray:
    return np.array([tuple(p) for p in points], dtype=np.int64).reshape(-1, k)


def verify_point_coverage(family: SupersatFamily, grid: GridSpec = None) -> CoverageReport:
    """
    each grid point must lie on one family line per distinct direction class;
    with no collisions in V that is |V| lines
    """
    grid = grid or family.config.grid
    pts = grid.as_array()
    if not family.lines:
        counts = np.zeros(len(pts), dtype=np.int64)
    else:
        counts = _lines_through(pts, family)
    count_map = {tuple(p): int(c) for p, c in zip(pts.tolist(), counts.tolist())}
    required = family.direction_classes
    min_count = int(counts.min()) if len(counts) else 0
    max_count = int(counts.max()) if len(counts) else 0
    ok = min_count >= required
    if not ok:
        logger.warning('coverage fails: min %d lines through a point, %d required', min_count, required)
    return CoverageReport(counts=count_map, min_count=min_count, max_count=max_count,
                          required=required, ok=ok)


def _check_subset(S, grid: GridSpec):
    pts = [tuple(int(x) for x in p) for p in S]
    for p in pts:
        if not grid.contains(p):
            raise DomainError('point {} is outside [{}]^{}'.format(p, grid.n, grid.k))
    return pts


def incidence_count(S, family: SupersatFamily) -> int:
    """sum over family lines of |S & line|"""
    pts = _check_subset(S, family.config.grid)
    if not pts or not family.lines:
        return 0
    return int(_lines_through(_as_array(pts, family.config.k), family).sum())


def count_r_tuples_on_family(S, family: SupersatFamily, r: int) -> int:
    """sum over family lines of C(|S & line|, r)"""
    if r < 2:
        raise DomainError('r must be >= 2, got {}'.format(r))
    pts = _check_subset(S, family.config.grid)
    if not pts:
        return 0
    arr = _as_array(pts, family.config.k)
    total = 0
    for d, reps in family.line_index().items():
        load = defaultdict(int)
        for rep in _reps(arr, d).tolist():
            rep = tuple(rep)
            if rep in reps:
                load[rep] += 1
        total += sum(math.comb(c, r) for c in load.values())
    return total


def size_sandwich(config: SupersatConfig, size_V: int = None) -> SizeSandwich:
    """
    prime counting estimates around |V|; the middle expressions need 2n/t >= 17
    and n/t > 1, the final ones additionally t <= n^0.99
    """
    if size_V is None:
        size_V = sum(p ** (config.k - 1) for p in _prime_range(config))
    n, k = config.n, config.k
    t = float(config.t)
    m = 2.0 * n / t
    half = n / t
    if m < PRIME_LOWER_FROM or half <= 1:
        return SizeSandwich(False, size_V, None, None, None, None, None)
    upper_middle = 1.26 * m / math.log(m) * m ** (k - 1)
    lower_middle = (m / math.log(m) - 1.26 * half / math.log(half)) * half ** (k - 1)
    upper_simplified = 3 ** k * n ** k / (t ** k * math.log(m))
    upper_final = lower_final = None
    if config.feasible:
        upper_final = 100 * 3 ** k * n ** k / (t ** k * math.log(n))
        lower_final = 0.1 * n ** k / (t ** k * math.log(n))
    return SizeSandwich(True, size_V, lower_middle, upper_middle, upper_simplified,
                        upper_final, lower_final)


def average_line_load(config: SupersatConfig) -> Real:
    """
    incidences over lines in the averaging step, t / (1000 * 9^k * n^s);
    equals c0 / (1000 * 9^k) = r when t = c0 * n^s
    """
    scale = 1000 * 9 ** config.k
    if config.exact and config.s == 0:
        return Fraction(config.t) / scale
    return float(config.t) / (scale * float(config.n) ** float(config.s))


def supersat_lower_bound(n=None, k=3, r=3, s=0.0, log_n: float = None) -> SupersatBound:
    """
    natural log of n^{2k-(k+1)s} / ((r*1000*9^k)^{k+1} log n).
    Pass log_n when n itself does not fit a float.
    """
    if k < 3 or r < 3:
        raise DomainError('bound is stated for k, r >= 3, got k={}, r={}'.format(k, r))
    if not 0 <= s <= 0.9:
        raise DomainError('s must lie in [0, 0.9], got {}'.format(s))
    if log_n is None:
        if n is None or n <= 1:
            raise DomainError('need n > 1 or log_n')
        log_n = math.log(n)
    if log_n <= 0:
        raise DomainError('log n must be positive, got {}'.format(log_n))
    s = float(s)
    log_c = math.log(r) + math.log(1000) + k * math.log(9)
    value = math.fsum([(2 * k - (k + 1) * s) * log_n, -(k + 1) * log_c, -math.log(log_n)])
    met = log_n >= max(100 * k, 100 * math.log(r))
    if not met:
        logger.warning('n below max(e^{100k}, r^100): formula value only, hypotheses unmet')
    return SupersatBound(n_log=log_n, k=k, r=r, s=s, log_bound=LogValue(value, 1), hypotheses_met=met)
