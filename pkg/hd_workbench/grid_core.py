#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
grid [n]^k, its maximal lines and the collinearity hypergraph H(n,k,r)

All geometry is exact integer arithmetic. A line is stored canonically: primitive
direction whose first nonzero coordinate is positive, anchored at its
lexicographically smallest grid point.

@time  : 2026/10/10 11:48
"""
import math
import logging
import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from hd_workbench.errors import DomainError, ResourceLimitError
from utils.common import fraction_to_str, str_to_fraction

logger = logging.getLogger(__name__)

Point = Tuple[int, ...]

DEFAULT_MAX_LINES = 20000000
# exact line counting scans at most this many directions
DIRECTION_SCAN_CAP = 1000000


@dataclass(frozen=True)
class GridSpec(object):
    n: int
    k: int

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise DomainError('grid needs n >= 1 and k >= 1, got n={}, k={}'.format(self.n, self.k))

    @property
    def point_count(self) -> int:
        return self.n ** self.k

    def points(self) -> Iterable[Point]:
        """lexicographic order, the index of a point in this order is its PRNG slot"""
        return itertools.product(range(1, self.n + 1), repeat=self.k)

    def contains(self, point: Sequence[int]) -> bool:
        return len(point) == self.k and all(1 <= x <= self.n for x in point)

    def as_array(self) -> np.ndarray:
        return np.array(list(self.points()), dtype=np.int64).reshape(-1, self.k)

    def to_json(self):
        return {'n': self.n, 'k': self.k}

    @classmethod
    def from_json(cls, obj):
        return cls(n=int(obj['n']), k=int(obj['k']))


@dataclass(frozen=True, order=True)
class GridLine(object):
    anchor: Point
    direction: Point
    count: int

    def points(self) -> Tuple[Point, ...]:
        return tuple(tuple(a + j * d for a, d in zip(self.anchor, self.direction))
                     for j in range(self.count))

    def to_json(self):
        return {'anchor': list(self.anchor), 'direction': list(self.direction), 'count': self.count}

    @classmethod
    def from_json(cls, obj):
        return cls(anchor=tuple(int(x) for x in obj['anchor']),
                   direction=tuple(int(x) for x in obj['direction']),
                   count=int(obj['count']))


@dataclass(frozen=True)
class CollinearStats(object):
    r: int
    edge_count: int
    avg_degree: Fraction
    codegree_max: Dict[int, int]
    max_line_count: int

    def to_json(self):
        return {
            'r': self.r,
            'edge_count': self.edge_count,
            'avg_degree': fraction_to_str(self.avg_degree),
            'codegree_max': {str(j): v for j, v in sorted(self.codegree_max.items())},
            'max_line_count': self.max_line_count,
        }

    @classmethod
    def from_json(cls, obj):
        return cls(r=int(obj['r']),
                   edge_count=int(obj['edge_count']),
                   avg_degree=str_to_fraction(obj['avg_degree']),
                   codegree_max={int(j): int(v) for j, v in obj['codegree_max'].items()},
                   max_line_count=int(obj['max_line_count']))


def canonical_direction(vec: Sequence[int]) -> Point:
    """primitive integer vector, first nonzero coordinate positive"""
    g = math.gcd(*[int(x) for x in vec])
    if g == 0:
        raise DomainError('zero vector has no direction')
    d = [int(x) // g for x in vec]
    first = next(x for x in d if x != 0)
    if first < 0:
        d = [-x for x in d]
    return tuple(d)


def line_key(p: Sequence[int], q: Sequence[int]) -> Tuple[Point, Point]:
    """
    (direction, representative) identifying the line through two distinct integer
    points; the representative is the lattice point of the line whose coordinate
    along the first nonzero direction entry lies in [0, d_i)
    """
    d = canonical_direction([b - a for a, b in zip(p, q)])
    i = next(idx for idx, x in enumerate(d) if x != 0)
    shift = p[i] // d[i]
    return d, tuple(a - shift * b for a, b in zip(p, d))


def _canonical_directions(k: int, max_abs: int) -> List[Point]:
    if k == 1:
        return [(1,)] if max_abs >= 1 else []
    directions = []
    for vec in itertools.product(range(-max_abs, max_abs + 1), repeat=k):
        if not any(vec):
            continue
        if next(x for x in vec if x != 0) < 0:
            continue
        if math.gcd(*vec) != 1:
            continue
        directions.append(tuple(vec))
    return directions


def hyperedge_count_bound(n, k, r) -> float:
    """
    upper bound on |E(H(n,k,r))| for n >= max(k, r), three cases r <= k, r = k+1, r > k+1
    (the r > k+1 branch is applied for every such r, including r > 2k)
    """
    if n < max(k, r):
        raise DomainError('bound needs n >= max(k, r), got n={}, k={}, r={}'.format(n, k, r))
    coef = k * 2 ** (r + k) / math.factorial(r)
    if r <= k:
        return coef * float(n) ** (2 * k)
    if r == k + 1:
        return coef * float(n) ** (2 * k) * math.log(n)
    return k * 2 ** (r + k + 1) / math.factorial(r) * float(n) ** (r + k - 1)


def count_lines(grid: GridSpec, min_count: int) -> Optional[int]:
    """
    exact number of maximal lines with >= min_count points, without listing them.
    Along d, A(m) = prod_i (n - (m-1)|d_i|)_+ start points carry an m-point segment and a
    line of c >= m points carries c-m+1 of them, so A(m) - A(m+1) counts those lines.
    None when the direction scan would exceed DIRECTION_SCAN_CAP.
    """
    n, k = grid.n, grid.k
    if n < min_count:
        return 0
    max_abs = (n - 1) // (min_count - 1)
    if k > 1 and (2 * max_abs + 1) ** k // 2 > DIRECTION_SCAN_CAP or grid.point_count >= 2 ** 62:
        return None
    d = np.abs(np.array(_canonical_directions(k, max_abs), dtype=np.int64).reshape(-1, k))

    def starts(m):
        return np.clip(n - m * d, 0, None).prod(axis=1)

    return int((starts(min_count - 1) - starts(min_count)).sum())


def estimate_line_count(grid: GridSpec, min_count: int) -> float:
    """
    the exact count when the direction scan is affordable; otherwise lines with
    >= min_count points each carry a min_count-tuple, so |E(H(n,k,min_count))| bounds
    them, and the pair count is used where that bound is not defined
    """
    exact = count_lines(grid, min_count)
    if exact is not None:
        return float(exact)
    pairs = float(math.comb(grid.point_count, 2))
    if grid.n >= max(grid.k, min_count):
        return min(pairs, hyperedge_count_bound(grid.n, grid.k, min_count))
    return pairs


def enumerate_lines(grid: GridSpec, min_count: int = 2, max_lines: int = DEFAULT_MAX_LINES,
                    show_progress: bool = False) -> List[GridLine]:
    """
    Every maximal collinear subset of [n]^k with at least min_count points,
    sorted by (anchor, direction).
    """
    if min_count < 2:
        raise DomainError('min_count must be >= 2, got {}'.format(min_count))
    estimate = estimate_line_count(grid, min_count)
    if estimate > max_lines:
        raise ResourceLimitError('estimated {:.3g} lines for n={}, k={}, min_count={} exceeds cap {}'.format(
            estimate, grid.n, grid.k, min_count, max_lines))

    n = grid.n
    # no line carries more than n grid points
    if n < min_count:
        return []
    # a line with m points spans (m-1)*|d_i| <= n-1 in every coordinate
    max_abs = (n - 1) // (min_count - 1)
    directions = _canonical_directions(grid.k, max_abs)
    pts = grid.as_array()

    lines = []
    for d in tqdm(directions, desc='directions', disable=not show_progress):
        dv = np.array(d, dtype=np.int64)
        prev = pts - dv
        is_start = ((prev < 1) | (prev > n)).any(axis=1)
        steps = np.full(len(pts), n, dtype=np.int64)
        for i, di in enumerate(d):
            if di > 0:
                steps = np.minimum(steps, (n - pts[:, i]) // di)
            elif di < 0:
                steps = np.minimum(steps, (pts[:, i] - 1) // (-di))
        counts = steps + 1
        mask = is_start & (counts >= min_count)
        for anchor, c in zip(pts[mask].tolist(), counts[mask].tolist()):
            lines.append(GridLine(anchor=tuple(anchor), direction=d, count=int(c)))
    lines.sort()
    logger.debug('n=%d k=%d min_count=%d: %d directions, %d lines', n, grid.k, min_count,
                 len(directions), len(lines))
    return lines


def count_collinear_tuples(grid: GridSpec, r: int, max_lines: int = DEFAULT_MAX_LINES) -> int:
    """|E(H(n,k,r))| exactly"""
    if r < 2:
        raise DomainError('r must be >= 2, got {}'.format(r))
    return sum(math.comb(line.count, r) for line in enumerate_lines(grid, r, max_lines))


def collinear_stats(grid: GridSpec, r: int, max_lines: int = DEFAULT_MAX_LINES) -> CollinearStats:
    """
    exact edge count, average degree and maximum co-degrees. A j-set with j >= 2
    has positive co-degree only if it is collinear, so Delta_j is a max over lines.
    """
    if r < 2:
        raise DomainError('r must be >= 2, got {}'.format(r))
    lines = enumerate_lines(grid, r, max_lines)
    edge_count = sum(math.comb(line.count, r) for line in lines)
    codegree = {}
    for j in range(2, r + 1):
        codegree[j] = max((math.comb(line.count - j, r - j) for line in lines), default=0)
    # with no r-point line the axis lines, n points each, are still the longest
    max_line_count = max((line.count for line in lines), default=grid.n if grid.n >= 2 else 1)
    return CollinearStats(r=r,
                          edge_count=edge_count,
                          avg_degree=Fraction(r * edge_count, grid.point_count),
                          codegree_max=codegree,
                          max_line_count=max_line_count)


def vertex_degrees(grid: GridSpec, r: int, max_lines: int = DEFAULT_MAX_LINES) -> Dict[Point, int]:
    """deg(v) = sum over lines through v of C(count-1, r-1)"""
    degrees = Counter({p: 0 for p in grid.points()})
    for line in enumerate_lines(grid, r, max_lines):
        contribution = math.comb(line.count - 1, r - 1)
        for p in line.points():
            degrees[p] += contribution
    return dict(degrees)


def is_collinear(points: Sequence[Sequence[int]]) -> bool:
    """exact rank test on the difference vectors"""
    if len(points) < 2:
        raise DomainError('collinearity needs at least 2 points')
    pts = [tuple(int(x) for x in p) for p in points]
    if len(set(pts)) != len(pts):
        raise DomainError('duplicate points in collinearity test')
    dim = len(pts[0])
    base = pts[0]
    d0 = [b - a for a, b in zip(base, pts[1])]
    for p in pts[2:]:
        e = [b - a for a, b in zip(base, p)]
        for i in range(dim):
            for j in range(i + 1, dim):
                if d0[i] * e[j] - d0[j] * e[i] != 0:
                    return False
    return True


def collinear_groups(points: Iterable[Sequence[int]], min_count: int = 2) -> List[Tuple[Point, ...]]:
    """
    Maximal collinear subsets of an arbitrary integer point set with at least
    min_count members; every group sorted, groups sorted.
    """
    pts = sorted(set(tuple(int(x) for x in p) for p in points))
    groups = defaultdict(set)
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            key = line_key(p, q)
            groups[key].add(p)
            groups[key].add(q)
    result = [tuple(sorted(g)) for g in groups.values() if len(g) >= min_count]
    result.sort()
    return result
