#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
line-section hypergraph H_q(P) and its chromatic number, the g_q(m) lower-bound
pipeline (k = q, u = q+1 plan) and the greedy upper-bound experiment.

A coloring is proper when no line carries q points of one color; checking each
maximal section for a color used >= q times covers every section of size >= q.

@time  : 2026/10/15 10:02
"""
import math
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from hd_workbench.errors import DomainError
from hd_workbench.grid_core import GridSpec, collinear_groups
from hd_workbench.param_plan import ParameterPlan, coloring_plan
from hd_workbench.planar import ASYMPTOTIC_BANNER, project_to_plane
from hd_workbench.randcon import run_construction, verify_no_u_collinear
from hd_workbench.search import PackingSearch
from utils.math_util import MathUtil

logger = logging.getLogger(__name__)

PlanePoint = Tuple[int, int]


@dataclass(frozen=True)
class LineSectionHypergraph(object):
    points: Tuple[PlanePoint, ...]
    q: int
    edges: Tuple[Tuple[PlanePoint, ...], ...]

    @property
    def m(self):
        return len(self.points)

    def edge_index(self) -> List[List[int]]:
        """edges as point indices"""
        index = {p: i for i, p in enumerate(self.points)}
        return [[index[p] for p in e] for e in self.edges]


@dataclass(frozen=True)
class ChromaticResult(object):
    exact: Optional[int]
    greedy_upper: int
    lower: int
    coloring: Dict[PlanePoint, int]
    nodes: int

    def to_json(self):
        return {'exact': self.exact, 'greedy_upper': self.greedy_upper, 'lower': self.lower, 'nodes': self.nodes}


@dataclass(frozen=True)
class GqReport(object):
    plan: ParameterPlan
    n: int
    seed: int
    m: int
    max_independent: int
    max_independent_exact: bool
    chi_lower: int
    chromatic: ChromaticResult
    ideal_exponent: Fraction
    ideal_bound: float
    no_q_plus_one_collinear: bool
    banner: Optional[str]

    def to_json(self):
        return {
            'plan': self.plan.to_json(),
            'n': self.n, 'seed': self.seed, 'm': self.m,
            'max_independent': self.max_independent,
            'max_independent_exact': self.max_independent_exact,
            'chi_lower': self.chi_lower,
            'chromatic': self.chromatic.to_json(),
            'ideal_exponent': {'value': str(self.ideal_exponent), 'tag': 'exact'},
            'ideal_bound': {'value': self.ideal_bound, 'tag': 'float'},
            'no_q_plus_one_collinear': self.no_q_plus_one_collinear,
            'banner': self.banner,
        }


def build_Hq(points: Sequence[Sequence[int]], q: int) -> LineSectionHypergraph:
    """maximal line sections of size >= q"""
    if q < 2:
        raise DomainError('q must be >= 2, got {}'.format(q))
    pts = tuple(sorted(set(tuple(int(v) for v in p) for p in points)))
    return LineSectionHypergraph(points=pts, q=q, edges=tuple(collinear_groups(pts, min_count=q)))


def is_proper_coloring(H: LineSectionHypergraph, coloring: Dict[PlanePoint, int]) -> bool:
    for edge in H.edges:
        if max(Counter(coloring[p] for p in edge).values()) >= H.q:
            return False
    return True


def max_color_class_bound(H: LineSectionHypergraph, budget: int = 200000) -> Tuple[int, bool]:
    """
    largest edge-free subset M (every color class is one), and whether M is exact;
    chi >= ceil(m / M)
    """
    outcome = PackingSearch(H.m, H.edge_index(), capacity=H.q - 1, budget=budget).run()
    return len(outcome.best), outcome.optimal


class _ColoringState(object):

    def __init__(self, H: LineSectionHypergraph):
        self.H = H
        self.edges = H.edge_index()
        self.vertex_edges = [[] for _ in range(H.m)]
        for eid, edge in enumerate(self.edges):
            for v in edge:
                self.vertex_edges[v].append(eid)
        self.counts = [Counter() for _ in self.edges]

    def allowed(self, v: int, c: int) -> bool:
        return all(self.counts[e][c] < self.H.q - 1 for e in self.vertex_edges[v])

    def assign(self, v: int, c: int):
        for e in self.vertex_edges[v]:
            self.counts[e][c] += 1

    def release(self, v: int, c: int):
        for e in self.vertex_edges[v]:
            self.counts[e][c] -= 1


def greedy_coloring(H: LineSectionHypergraph) -> List[int]:
    """canonical lexicographic order, smallest admissible color"""
    state = _ColoringState(H)
    colors = []
    for v in range(H.m):
        c = 0
        while not state.allowed(v, c):
            c += 1
        state.assign(v, c)
        colors.append(c)
    return colors


def chromatic_number(H: LineSectionHypergraph, budget: int = 200000,
                     max_independent: int = None) -> ChromaticResult:
    """
    greedy upper bound, then backtracking with colors introduced in order and
    pruning at the best count found
    """
    if H.m == 0:
        return ChromaticResult(0, 0, 0, {}, 0)
    greedy = greedy_coloring(H)
    best_k = max(greedy) + 1
    best = list(greedy)
    lower = 2 if H.edges else 1
    if max_independent:
        lower = max(lower, math.ceil(H.m / max_independent))

    state = _ColoringState(H)
    # most constrained vertices first
    order = sorted(range(H.m), key=lambda v: (-len(state.vertex_edges[v]), v))
    colors = [-1] * H.m
    nodes = 0
    exhausted = False

    def backtrack(pos: int, current_k: int):
        nonlocal best_k, best, nodes, exhausted
        if best_k <= lower or exhausted:
            return
        nodes += 1
        if nodes > budget:
            exhausted = True
            return
        if pos == len(order):
            if current_k < best_k:
                best_k, best = current_k, list(colors)
            return
        v = order[pos]
        for c in range(min(current_k + 1, best_k - 1)):
            if not state.allowed(v, c):
                continue
            colors[v] = c
            state.assign(v, c)
            backtrack(pos + 1, max(current_k, c + 1))
            state.release(v, c)
            colors[v] = -1

    if best_k > lower:
        backtrack(0, 0)
    exact = best_k if not exhausted else None
    coloring = {H.points[v]: c for v, c in enumerate(best)}
    assert is_proper_coloring(H, coloring), 'returned coloring is not proper'
    if exact is not None:
        assert lower <= exact <= max(greedy) + 1
    return ChromaticResult(exact=exact, greedy_upper=max(greedy) + 1, lower=lower, coloring=coloring,
                           nodes=min(nodes, budget))


def _pipeline_n(plan: ParameterPlan, m_target: int) -> int:
    """smallest n with expected sample size n^{k + alpha_exp} >= m_target"""
    n = 2
    while float(n) ** float(plan.k + plan.alpha_exp) < m_target:
        n += 1
    return n


def gq_lower_pipeline(q: int, eta, m_target: int = 20, seed: int = 0, budget: int = 200000,
                      n: int = None) -> GqReport:
    """
    sample at the coloring plan's alpha, delete collinear (q+1)-tuples, project, and
    bound chi(H_q(P)) from below by ceil(|P| / M)
    """
    if q < 3:
        raise DomainError('q must be >= 3, got {}'.format(q))
    plan = coloring_plan(q, eta)
    n = _pipeline_n(plan, m_target) if n is None else n
    grid = GridSpec(n, plan.k)
    alpha = float(n) ** float(plan.alpha_exp)
    logger.info('***** Running g_q pipeline q=%d n=%d k=%d alpha=%.6g *****', q, n, plan.k, alpha)
    run = run_construction(grid, alpha, seed, plan.u)
    planar = project_to_plane(run.survivors, seed=seed) if run.survivors else None
    points = planar.points if planar is not None else ()
    H = build_Hq(points, q)
    m = H.m

    M, M_exact = max_color_class_bound(H, budget=budget) if m else (0, True)
    chi_lower = math.ceil(m / M) if M else 0
    chromatic = chromatic_number(H, budget=budget, max_independent=M if M_exact else None)
    if chromatic.exact is not None and M_exact:
        assert chromatic.exact >= chi_lower, 'chi %d below pigeonhole bound %d' % (chromatic.exact, chi_lower)
    exponent = plan.m_units['chi_exp']
    ideal = float(m) ** float(exponent) if m else 0.0
    banner = ASYMPTOTIC_BANNER if not plan.hypotheses_met(math.log(max(m, 2))) else None
    return GqReport(plan=plan, n=n, seed=seed, m=m, max_independent=M, max_independent_exact=M_exact,
                    chi_lower=chi_lower, chromatic=chromatic, ideal_exponent=exponent, ideal_bound=ideal,
                    no_q_plus_one_collinear=verify_no_u_collinear(points, q + 1), banner=banner)


def _instance(kind: str, m: int, rng: np.random.Generator) -> List[PlanePoint]:
    if kind == 'grid':
        side = max(1, math.isqrt(m))
        return [(x, y) for x in range(1, side + 1) for y in range(1, side + 1)]
    if kind == 'generic':
        # moment curve, no three collinear
        shift = int(rng.integers(0, 1000))
        return [(t + shift, (t + shift) ** 2) for t in range(m)]
    if kind == 'random':
        side = 2 * max(2, math.isqrt(m) + 1)
        flat = rng.choice(side * side, size=min(m, side * side), replace=False)
        return [(int(i) // side, int(i) % side) for i in flat]
    raise DomainError('unknown instance kind {}'.format(kind))


def greedy_upper_experiment(q: int, m: int, trials: int = 10, seed: int = 0, kind: str = 'random',
                            show_progress: bool = False) -> Tuple[pd.DataFrame, Dict[str, float]]:
    """greedy chromatic numbers of random instances against m^{1/(q-1)}; reported, never asserted"""
    if trials < 1:
        raise DomainError('trials must be >= 1, got {}'.format(trials))
    rng = np.random.default_rng(seed)
    rows = []
    for trial in tqdm(range(trials), desc='trials', disable=not show_progress):
        H = build_Hq(_instance(kind, m, rng), q)
        chi = max(greedy_coloring(H)) + 1 if H.m else 0
        scale = float(H.m) ** (1.0 / (q - 1)) if H.m else 1.0
        rows.append({'trial': trial, 'kind': kind, 'm': H.m, 'edges': len(H.edges),
                     'greedy': chi, 'ratio': MathUtil.try_divide(chi, scale)})
    table = pd.DataFrame(rows)
    modes = ['mean', 'std', 'max', 'min']
    summary = dict(zip(['ratio_' + mode for mode in modes], MathUtil.aggregate(table['ratio'].values, modes)))
    summary.update(dict(zip(['greedy_' + mode for mode in modes], MathUtil.aggregate(table['greedy'].values, modes))))
    return table, summary
