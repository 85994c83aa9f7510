#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
from a point set in Z^k to a planar line family: collinearity-faithful projection,
point-line duality (a, b) -> y = a x - b, (p,q)-property verification, piercing
bounds and the certificate that ties a construction run to them

All intersections are exact rationals (Fraction).

@time  : 2026/10/14 11:20
"""
import math
import logging
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from hd_workbench.errors import DomainError, PreconditionError, VerificationError
from hd_workbench.grid_core import Point, collinear_groups, is_collinear
from hd_workbench.param_plan import ParameterPlan
from hd_workbench.randcon import RandomSubsetRun
from hd_workbench.report import validate
from hd_workbench.search import CP_TIME_LIMIT, HittingSetSearch, PackingSearch
from utils.common import fraction_to_str, hash_points, str_to_fraction

logger = logging.getLogger(__name__)

COEFFICIENT_RANGE = 1000000
RETRY_CAP = 16
# exhaustive triple comparison up to this many points
TRIPLE_CHECK_CAP = 60
ASYMPTOTIC_BANNER = 'asymptotic-hypotheses-unmet'

Line = Tuple[Fraction, Fraction]


class Verdict(Enum):
    PROVED = 'proved'
    REFUTED = 'refuted'
    UNKNOWN = 'unknown'


@dataclass(frozen=True)
class PlanarPointSet(object):
    # points[i] is the image of source[i]
    points: Tuple[Tuple[int, int], ...]
    source: Tuple[Point, ...]
    coeff_a: Tuple[int, ...]
    coeff_b: Tuple[int, ...]
    shear: int = 0
    seed: Optional[int] = None
    attempts: int = 1

    @property
    def source_hash(self):
        return hash_points(self.source)

    def to_json(self):
        return {
            'points': [list(p) for p in self.points],
            'provenance': {
                'coeff_a': list(self.coeff_a),
                'coeff_b': list(self.coeff_b),
                'shear': self.shear,
                'seed': self.seed,
                'attempts': self.attempts,
                'source_hash': self.source_hash,
            },
        }


@dataclass(frozen=True)
class LineFamily(object):
    """lines y = a x - b stored as (a, b)"""
    lines: Tuple[Line, ...]
    provenance: Dict = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.lines)) != len(self.lines):
            raise DomainError('line family contains duplicate lines')

    def __len__(self):
        return len(self.lines)

    @classmethod
    def from_lines(cls, lines, provenance=None):
        return cls(lines=tuple((Fraction(a), Fraction(b)) for a, b in lines), provenance=dict(provenance or {}))

    def to_json(self):
        return {'lines': [[fraction_to_str(a), fraction_to_str(b)] for a, b in self.lines],
                'provenance': self.provenance}

    @classmethod
    def from_json(cls, obj):
        return cls(lines=tuple((str_to_fraction(a), str_to_fraction(b)) for a, b in obj['lines']),
                   provenance=obj.get('provenance', {}))


@dataclass(frozen=True)
class PQResult(object):
    verdict: Verdict
    p: int
    q: int
    max_free: int
    upper_bound: int
    witness: Optional[Tuple[int, ...]]
    nodes: int

    def to_json(self):
        return {
            'verdict': self.verdict.value, 'p': self.p, 'q': self.q,
            'max_free': self.max_free, 'upper_bound': self.upper_bound,
            'witness': list(self.witness) if self.witness is not None else None,
            'nodes': self.nodes,
        }


@dataclass(frozen=True)
class PiercingResult(object):
    lower: Fraction
    exact: Optional[int]
    greedy_upper: int
    max_concurrency: int
    piercing_points: Tuple[Tuple[Fraction, Fraction], ...]

    def to_json(self):
        return {
            'lower': fraction_to_str(self.lower),
            'exact': self.exact,
            'greedy_upper': self.greedy_upper,
            'max_concurrency': self.max_concurrency,
            'piercing_points': [[fraction_to_str(x), fraction_to_str(y)] for x, y in self.piercing_points],
        }


@dataclass(frozen=True)
class PiercingCertificate(object):
    family: LineFamily
    p: int
    q: int
    u: int
    pq: PQResult
    piercing: PiercingResult
    piercing_lower_u: Fraction
    realized_T: Optional[float]
    ideal_T: Fraction
    banner: Optional[str]
    provenance: Dict

    @property
    def max_concurrency(self):
        return self.piercing.max_concurrency

    def to_json(self):
        return {
            'family': self.family.to_json(),
            'p': self.p, 'q': self.q, 'u': self.u,
            'pq_verified': self.pq.to_json(),
            'max_concurrency': self.max_concurrency,
            'piercing_lower': fraction_to_str(self.piercing_lower_u),
            'piercing': self.piercing.to_json(),
            'piercing_exact': self.piercing.exact,
            'realized_T': {'value': self.realized_T, 'tag': 'float'},
            'ideal_T': {'value': fraction_to_str(self.ideal_T), 'tag': 'exact'},
            'banner': self.banner,
            'provenance': self.provenance,
        }


def collinear_triples(points: Sequence[Sequence[int]]) -> List[Tuple[Point, Point, Point]]:
    """every collinear triple, by the exact predicate over all triples"""
    pts = sorted(set(tuple(p) for p in points))
    return [t for t in itertools.combinations(pts, 3) if is_collinear(t)]


def _apply(source: Sequence[Point], a, b, shear: int) -> List[Tuple[int, int]]:
    image = []
    for x in source:
        px = sum(int(ai) * int(xi) for ai, xi in zip(a, x))
        py = sum(int(bi) * int(xi) for bi, xi in zip(b, x))
        image.append((px + shear * py, py))
    return image


def _faithful(source: Sequence[Point], image: Sequence[Tuple[int, int]]) -> bool:
    """injective and the same collinear groups on both sides"""
    if len(set(image)) != len(image):
        return False
    to_image = dict(zip(source, image))
    src_groups = set(tuple(sorted(to_image[p] for p in g)) for g in collinear_groups(source, 3))
    img_groups = set(collinear_groups(image, 3))
    if src_groups != img_groups:
        return False
    if len(source) <= TRIPLE_CHECK_CAP:
        src_triples = set(tuple(sorted(to_image[p] for p in t)) for t in collinear_triples(source))
        if src_triples != set(collinear_triples(image)):
            return False
    return True


def _distinct_x(image) -> bool:
    xs = [p[0] for p in image]
    return len(set(xs)) == len(xs)


def project_to_plane(points: Sequence[Sequence[int]], seed: int = 0, coefficient_range: int = COEFFICIENT_RANGE,
                     retry_cap: int = RETRY_CAP) -> PlanarPointSet:
    """
    integer linear map x -> (sum a_i x_i, sum b_i x_i), then a shear (x, y) -> (x + c y, y)
    until all x-coordinates differ. Planar input tries the identity first.
    """
    source = sorted(set(tuple(int(v) for v in p) for p in points))
    if not source:
        raise PreconditionError('projection needs at least one point')
    k = len(source[0])
    rng = np.random.default_rng(seed)

    for attempt in range(1, retry_cap + 1):
        if attempt == 1 and k == 2:
            a, b = (1, 0), (0, 1)
        else:
            a = tuple(int(v) for v in rng.integers(-coefficient_range, coefficient_range + 1, size=k))
            b = tuple(int(v) for v in rng.integers(-coefficient_range, coefficient_range + 1, size=k))
        image = _apply(source, a, b, 0)
        if not _faithful(source, image):
            logger.warning('projection attempt %d not collinearity-faithful, retrying', attempt)
            continue
        shear = 0
        while not _distinct_x(image) and shear < retry_cap:
            shear += 1
            image = _apply(source, a, b, shear)
        if not _distinct_x(image):
            logger.warning('projection attempt %d: shear retries exhausted', attempt)
            continue
        if shear:
            logger.info('projection sheared by %d to separate x-coordinates', shear)
        return PlanarPointSet(points=tuple(image), source=tuple(source), coeff_a=a, coeff_b=b,
                              shear=shear, seed=seed, attempts=attempt)
    raise VerificationError('no faithful projection found in {} attempts'.format(retry_cap))


def dualize(planar) -> LineFamily:
    """(a, b) -> y = a x - b; rejects vertical collinear groups"""
    if isinstance(planar, PlanarPointSet):
        pts, provenance = list(planar.points), planar.to_json()['provenance']
    else:
        pts, provenance = [tuple(p) for p in planar], {}
    if len(set(pts)) != len(pts):
        raise DomainError('duplicate points cannot be dualized')
    for group in collinear_groups(pts, 3):
        if len(set(p[0] for p in group)) == 1:
            raise DomainError('vertical collinear group {} breaks duality, re-project'.format(group))
    return LineFamily.from_lines(pts, provenance=provenance)


def intersection(l1: Line, l2: Line) -> Optional[Tuple[Fraction, Fraction]]:
    (a1, b1), (a2, b2) = l1, l2
    if a1 == a2:
        return None
    x = (b1 - b2) / (a1 - a2)
    return x, a1 * x - b1


def concurrency_bundles(family: LineFamily) -> List[Tuple[Tuple[Fraction, Fraction], Tuple[int, ...]]]:
    """every intersection point with the indices of all lines through it, sorted by point"""
    through = defaultdict(set)
    lines = family.lines
    for i, j in itertools.combinations(range(len(lines)), 2):
        pt = intersection(lines[i], lines[j])
        if pt is not None:
            through[pt].update((i, j))
    return sorted((pt, tuple(sorted(idx))) for pt, idx in through.items())


def max_concurrency(family: LineFamily, bundles=None) -> int:
    if not len(family):
        return 0
    bundles = concurrency_bundles(family) if bundles is None else bundles
    return max((len(idx) for _, idx in bundles), default=1)


def concurrency_histogram(family: LineFamily, bundles=None) -> pd.DataFrame:
    """number of intersection points by how many lines pass through them"""
    bundles = concurrency_bundles(family) if bundles is None else bundles
    sizes = pd.Series([len(idx) for _, idx in bundles], dtype='int64')
    hist = sizes.value_counts().sort_index()
    return pd.DataFrame({'lines_through': hist.index.astype('int64'), 'points': hist.values.astype('int64')})


def verify_pq_property(family: LineFamily, p: int, q: int, budget: int = 200000) -> PQResult:
    """
    proved iff the largest sub-family with no q concurrent lines has fewer than p
    lines; refuted comes with such a p-subset
    """
    if not p >= q >= 3:
        raise DomainError('need p >= q >= 3, got p={}, q={}'.format(p, q))
    bundles = [idx for _, idx in concurrency_bundles(family) if len(idx) >= q]
    outcome = PackingSearch(len(family), bundles, capacity=q - 1, budget=budget).run(target=p)
    best = list(outcome.best)
    if len(best) >= p:
        witness = tuple(best[:p])
        return PQResult(Verdict.REFUTED, p, q, len(best), outcome.upper_bound, witness, outcome.nodes)
    if outcome.optimal:
        return PQResult(Verdict.PROVED, p, q, len(best), len(best), None, outcome.nodes)
    return PQResult(Verdict.UNKNOWN, p, q, len(best), outcome.upper_bound, None, outcome.nodes)


def piercing_number(family: LineFamily, budget: int = 200000, time_limit: float = CP_TIME_LIMIT) -> PiercingResult:
    """
    candidates are the intersection points, plus one private point for each line
    parallel to all others; lower = |F| / max concurrency. The branch and bound runs
    first, CP-SAT takes over when its node budget is spent.
    """
    n_lines = len(family)
    if n_lines == 0:
        return PiercingResult(Fraction(0), 0, 0, 0, ())
    bundles = concurrency_bundles(family)
    points = [pt for pt, _ in bundles]
    candidates = [idx for _, idx in bundles]
    met = set(i for idx in candidates for i in idx)
    for i in range(n_lines):
        if i not in met:
            a, b = family.lines[i]
            points.append((Fraction(0), -b))
            candidates.append((i,))
    top = max(len(c) for c in candidates)
    lower = Fraction(n_lines, top)

    solver = HittingSetSearch(n_lines, candidates, budget=budget)
    greedy = solver.greedy()
    outcome = solver.run()
    if not outcome.optimal:
        outcome = solver.solve_cp(time_limit=time_limit)
    exact = len(outcome.best) if outcome.optimal else None
    chosen = outcome.best if len(outcome.best) <= len(greedy) else greedy
    result = PiercingResult(lower=lower, exact=exact, greedy_upper=len(greedy), max_concurrency=top,
                            piercing_points=tuple(points[i] for i in chosen))
    assert lower <= len(greedy), 'greedy piercing %d below lower bound %s' % (len(greedy), lower)
    if exact is not None:
        assert math.ceil(lower) <= exact <= len(greedy), \
            'piercing sandwich broken: %s <= %d <= %d' % (lower, exact, len(greedy))
    return result


def default_p(plan: ParameterPlan, n: int) -> int:
    """ceil(n^{p_exp})"""
    return max(plan.q, math.ceil(float(n) ** float(plan.p_exp)))


def emit_certificate(run: RandomSubsetRun, plan: ParameterPlan, budget: int = 200000, p: int = None,
                     coefficient_range: int = COEFFICIENT_RANGE, retry_cap: int = RETRY_CAP,
                     time_limit: float = CP_TIME_LIMIT) -> PiercingCertificate:
    """project, dualize, verify (p,q) and bound the piercing number of one construction run"""
    if not run.survivors:
        raise PreconditionError('construction run has no surviving points')
    q, u, n = plan.q, run.u, run.grid.n
    p = default_p(plan, n) if p is None else p
    logger.info('***** Running certificate q=%d u=%d p=%d on %d points *****', q, u, p, len(run.survivors))

    planar = project_to_plane(run.survivors, seed=run.seed, coefficient_range=coefficient_range,
                              retry_cap=retry_cap)
    family = dualize(planar)
    pq = verify_pq_property(family, p, q, budget=budget)
    piercing = piercing_number(family, budget=budget, time_limit=time_limit)
    lower_u = Fraction(len(family), u - 1)
    if piercing.exact is not None and piercing.max_concurrency <= u - 1:
        assert piercing.exact >= math.ceil(lower_u), \
            'exact piercing %d below |F|/(u-1) = %s' % (piercing.exact, lower_u)

    ratio = len(family) / (u - 1)
    realized = math.log(ratio) / math.log(p) if p > 1 and ratio > 0 else None
    banner = ASYMPTOTIC_BANNER if not plan.hypotheses_met(math.log(n)) else None
    provenance = {
        'seed': run.seed,
        'alpha': run.alpha,
        'grid': run.grid.to_json(),
        'survivors_hash': hash_points(run.survivors),
        'projection': planar.to_json()['provenance'],
        'plan': plan.to_json(),
    }
    logger.info('pq verdict %s, piercing lower %s exact %s greedy %d, realized T %s',
                pq.verdict.value, piercing.lower, piercing.exact, piercing.greedy_upper, realized)
    cert = PiercingCertificate(family=family, p=p, q=q, u=u, pq=pq, piercing=piercing, piercing_lower_u=lower_u,
                               realized_T=realized, ideal_T=plan.T, banner=banner, provenance=provenance)
    validate(cert.to_json(), 'certificate')
    return cert
