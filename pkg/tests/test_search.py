#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
packing and hitting-set engines against exhaustive enumeration

@time  : 2026/10/17 10:30
"""
import itertools

import numpy as np
import pytest

from hd_workbench.search import HittingSetSearch, PackingSearch


def _brute_packing(n_items, blocks, capacity):
    for size in range(n_items, -1, -1):
        for combo in itertools.combinations(range(n_items), size):
            chosen = set(combo)
            if all(len(chosen & set(b)) <= capacity for b in blocks):
                return size
    return 0


def _brute_hitting(n_elements, candidates):
    for size in range(0, len(candidates) + 1):
        for combo in itertools.combinations(range(len(candidates)), size):
            covered = set()
            for i in combo:
                covered.update(candidates[i])
            if len(covered) == n_elements:
                return size
    raise AssertionError('no cover')


def _random_blocks(rng, n_items, n_blocks, low, high):
    return [sorted(rng.choice(n_items, size=int(rng.integers(low, high + 1)), replace=False).tolist())
            for _ in range(n_blocks)]


@pytest.mark.parametrize('seed', range(12))
def test_packing_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    n_items = int(rng.integers(5, 11))
    blocks = _random_blocks(rng, n_items, int(rng.integers(1, 7)), 2, min(5, n_items))
    capacity = int(rng.integers(1, 3))
    outcome = PackingSearch(n_items, blocks, capacity=capacity).run()
    assert outcome.optimal
    assert len(outcome.best) == _brute_packing(n_items, blocks, capacity)
    assert all(len(set(outcome.best) & set(b)) <= capacity for b in blocks)


def test_packing_takes_free_items():
    outcome = PackingSearch(5, [[0, 1, 2]], capacity=2).run()
    assert len(outcome.best) == 4
    assert {3, 4} <= set(outcome.best)


def test_packing_stops_at_target():
    blocks = [[0, 1, 2], [3, 4, 5], [6, 7, 8]]
    outcome = PackingSearch(9, blocks, capacity=2).run(target=3)
    assert len(outcome.best) >= 3
    assert not outcome.optimal


def test_packing_zero_target_is_immediate():
    outcome = PackingSearch(4, [[0, 1, 2]], capacity=2).run(target=1)
    assert outcome.best == (3,)
    assert outcome.nodes == 0


def test_packing_budget_reports_not_optimal():
    rng = np.random.default_rng(5)
    blocks = _random_blocks(rng, 40, 60, 3, 6)
    outcome = PackingSearch(40, blocks, capacity=2, budget=5).run()
    assert outcome.exhausted
    assert not outcome.optimal
    assert outcome.upper_bound >= len(outcome.best)


@pytest.mark.parametrize('seed', range(12))
def test_hitting_set_matches_brute_force(seed):
    rng = np.random.default_rng(100 + seed)
    n_elements = int(rng.integers(3, 9))
    candidates = _random_blocks(rng, n_elements, int(rng.integers(2, 8)), 1, n_elements)
    candidates += [[e] for e in range(n_elements)]
    solver = HittingSetSearch(n_elements, candidates)
    outcome = solver.run()
    assert outcome.optimal
    assert len(outcome.best) == _brute_hitting(n_elements, candidates)
    assert len(outcome.best) <= len(solver.greedy())


def test_hitting_set_requires_cover():
    with pytest.raises(ValueError):
        HittingSetSearch(3, [[0], [1]])


def test_hitting_set_budget():
    rng = np.random.default_rng(9)
    candidates = _random_blocks(rng, 30, 80, 2, 5) + [[e] for e in range(30)] + [list(range(20))]
    outcome = HittingSetSearch(30, candidates, budget=3).run()
    assert not outcome.optimal
    assert outcome.lower_bound <= len(outcome.best)


@pytest.mark.parametrize('seed', range(6))
def test_hitting_set_cp_matches_branch_and_bound(seed):
    rng = np.random.default_rng(200 + seed)
    n_elements = int(rng.integers(4, 9))
    candidates = _random_blocks(rng, n_elements, int(rng.integers(2, 8)), 1, n_elements)
    candidates += [[e] for e in range(n_elements)]
    solver = HittingSetSearch(n_elements, candidates)
    outcome = solver.solve_cp(time_limit=30)
    assert outcome.optimal
    assert len(outcome.best) == _brute_hitting(n_elements, candidates)
    covered = set()
    for i in outcome.best:
        covered.update(candidates[i])
    assert covered == set(range(n_elements))


def test_hitting_set_cp_after_budget():
    rng = np.random.default_rng(9)
    candidates = _random_blocks(rng, 30, 80, 2, 5) + [[e] for e in range(30)] + [list(range(20))]
    solver = HittingSetSearch(30, candidates, budget=3)
    budgeted = solver.run()
    exact = solver.solve_cp(time_limit=60)
    assert exact.optimal
    assert budgeted.lower_bound <= len(exact.best) <= len(budgeted.best)
