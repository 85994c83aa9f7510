#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
exact searches shared by randcon, planar and coloring

PackingSearch   largest item set meeting every block in at most `capacity` items
                (independent sets of the q-collinearity hypergraph, line subsets
                with no q concurrent)
HittingSetSearch  fewest candidates covering every element (piercing), with a
                  CP-SAT fallback once the node budget is spent

Both are node-budgeted; running out of budget is reported through the
`optimal` flag, never raised.

@time  : 2026/10/12 14:55
"""
import sys
import math
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ortools.sat.python import cp_model

logger = logging.getLogger(__name__)

CP_TIME_LIMIT = 300.0


@dataclass(frozen=True)
class SearchOutcome(object):
    best: Tuple[int, ...]
    optimal: bool
    upper_bound: int
    nodes: int
    exhausted: bool


@dataclass(frozen=True)
class HittingOutcome(object):
    best: Tuple[int, ...]
    optimal: bool
    lower_bound: int
    nodes: int
    exhausted: bool


class _BudgetExhausted(Exception):
    pass


class _TargetReached(Exception):
    pass


class PackingSearch(object):
    """
    Branch and bound over items, include before exclude.

    Items are laid out part by part, a part being one block of a greedy disjoint
    block cover; a part can add at most `capacity` items, which gives the bound.
    """

    def __init__(self, n_items: int, blocks: Sequence[Sequence[int]], capacity: int, budget: int = 200000):
        if capacity < 0:
            raise ValueError('capacity must be non-negative, got %d' % capacity)
        self.n_items = n_items
        self.capacity = capacity
        self.budget = budget
        # blocks no larger than the capacity never bind
        self.blocks = [tuple(sorted(set(b))) for b in blocks if len(set(b)) > capacity]
        self.item_blocks = [[] for _ in range(n_items)]
        for bid, block in enumerate(self.blocks):
            for item in block:
                self.item_blocks[item].append(bid)
        self._layout()

    def _layout(self):
        constrained = [i for i in range(self.n_items) if self.item_blocks[i]]
        self.free_items = [i for i in range(self.n_items) if not self.item_blocks[i]]
        degree = {i: len(self.item_blocks[i]) for i in constrained}

        covered = set()
        parts = []
        for bid in sorted(range(len(self.blocks)), key=lambda b: (-len(self.blocks[b]), self.blocks[b])):
            block = self.blocks[bid]
            if covered.isdisjoint(block):
                parts.append((bid, sorted(block, key=lambda i: (-degree[i], i))))
                covered.update(block)
        rest = sorted((i for i in constrained if i not in covered), key=lambda i: (-degree[i], i))

        self.order = []
        self.part_of = []
        for pid, (_, items) in enumerate(parts):
            self.order.extend(items)
            self.part_of.extend([pid] * len(items))
        self.order.extend(rest)
        self.part_of.extend([-1] * len(rest))
        self.part_block = [bid for bid, _ in parts]

        # suffix_cap[pid]: most items the parts from pid on can add
        self.suffix_cap = [0] * (len(parts) + 1)
        for pid in range(len(parts) - 1, -1, -1):
            self.suffix_cap[pid] = self.suffix_cap[pid + 1] + min(len(parts[pid][1]), self.capacity)
        self.part_end = {}
        for pos, pid in enumerate(self.part_of):
            self.part_end[pid] = pos + 1
        self.n_rest = len(rest)

    def _bound(self, pos: int, chosen: int) -> int:
        """most items any completion of the current branch can reach"""
        if pos >= len(self.order):
            return chosen
        pid = self.part_of[pos]
        if pid < 0:
            return chosen + len(self.order) - pos
        remaining_here = self.part_end[pid] - pos
        room = self.capacity - self.counts[self.part_block[pid]]
        return chosen + min(remaining_here, room) + self.suffix_cap[pid + 1] + self.n_rest

    def _dfs(self, pos: int):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExhausted()
        chosen = len(self.current)
        if chosen > len(self.best):
            self.best = list(self.current)
            if self.goal is not None and chosen >= self.goal:
                raise _TargetReached()
        if pos >= len(self.order):
            return
        if self._bound(pos, chosen) <= len(self.best):
            return
        item = self.order[pos]
        blocks = self.item_blocks[item]
        if all(self.counts[b] < self.capacity for b in blocks):
            for b in blocks:
                self.counts[b] += 1
            self.current.append(item)
            self._dfs(pos + 1)
            self.current.pop()
            for b in blocks:
                self.counts[b] -= 1
        self._dfs(pos + 1)

    def run(self, target: Optional[int] = None) -> SearchOutcome:
        """
        maximum packing; with target, stop at the first packing of that size.
        Free items (in no binding block) are always taken.
        """
        free = len(self.free_items)
        self.goal = None if target is None else max(0, target - free)
        self.counts = [0] * len(self.blocks)
        self.current = []
        self.best = []
        self.nodes = 0
        root_bound = self._bound(0, 0) + free
        sys.setrecursionlimit(max(sys.getrecursionlimit(), len(self.order) * 2 + 100))

        optimal, exhausted = True, False
        try:
            if self.goal == 0:
                raise _TargetReached()
            self._dfs(0)
        except _TargetReached:
            optimal = False
        except _BudgetExhausted:
            optimal, exhausted = False, True
            logger.info('packing search stopped after %d nodes, best %d', self.budget, len(self.best) + free)

        best = tuple(sorted(self.best + self.free_items))
        upper = len(best) if optimal else root_bound
        return SearchOutcome(best=best, optimal=optimal, upper_bound=upper,
                             nodes=min(self.nodes, self.budget), exhausted=exhausted)


def _popcount(x: int) -> int:
    return bin(x).count('1')


class HittingSetSearch(object):
    """
    Minimum hitting set over bitmasks: branch on the uncovered element with the
    fewest covering candidates, bound by ceil(uncovered / widest candidate).
    """

    def __init__(self, n_elements: int, candidates: Sequence[Sequence[int]], budget: int = 200000):
        self.n_elements = n_elements
        self.budget = budget
        self.masks = []
        for c in candidates:
            mask = 0
            for e in c:
                mask |= 1 << e
            self.masks.append(mask)
        self.universe = (1 << n_elements) - 1
        union = 0
        for m in self.masks:
            union |= m
        if union != self.universe:
            raise ValueError('some element is covered by no candidate')
        self.elem_to_cands = [[] for _ in range(n_elements)]
        for i, c in enumerate(candidates):
            for e in sorted(set(c)):
                self.elem_to_cands[e].append(i)
        # static: no candidate covers more than its full size
        self.widest = max((_popcount(m) for m in self.masks), default=1)

    def greedy(self) -> List[int]:
        covered, chosen = 0, []
        while covered != self.universe:
            best = max(range(len(self.masks)), key=lambda i: (_popcount(self.masks[i] & ~covered), -i))
            chosen.append(best)
            covered |= self.masks[best]
        return sorted(chosen)

    def _lower(self, covered: int) -> int:
        rem = self.universe & ~covered
        if rem == 0:
            return 0
        return -(-_popcount(rem) // self.widest)

    def _pick_element(self, covered: int) -> int:
        rem = self.universe & ~covered
        best_e, best_freq = None, None
        while rem:
            low = rem & -rem
            e = low.bit_length() - 1
            freq = len(self.elem_to_cands[e])
            if best_freq is None or freq < best_freq:
                best_e, best_freq = e, freq
            rem ^= low
        return best_e

    def _dfs(self, covered: int):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExhausted()
        if covered == self.universe:
            if len(self.current) < len(self.best):
                self.best = sorted(self.current)
            return
        if len(self.current) + self._lower(covered) >= len(self.best):
            return
        e = self._pick_element(covered)
        rem = ~covered
        options = sorted(self.elem_to_cands[e], key=lambda i: (-_popcount(self.masks[i] & rem), i))
        for i in options:
            self.current.append(i)
            self._dfs(covered | self.masks[i])
            self.current.pop()

    def run(self) -> HittingOutcome:
        self.best = self.greedy()
        self.current = []
        self.nodes = 0
        root_lower = self._lower(0)
        sys.setrecursionlimit(max(sys.getrecursionlimit(), self.n_elements * 2 + 100))
        optimal, exhausted = True, False
        try:
            self._dfs(0)
        except _BudgetExhausted:
            optimal, exhausted = False, True
            logger.info('hitting set search stopped after %d nodes, best %d', self.budget, len(self.best))
        lower = len(self.best) if optimal else root_lower
        return HittingOutcome(best=tuple(self.best), optimal=optimal, lower_bound=lower,
                              nodes=min(self.nodes, self.budget), exhausted=exhausted)

    def solve_cp(self, time_limit: float = CP_TIME_LIMIT, seed: int = 0) -> HittingOutcome:
        """
        minimum hitting set as a 0/1 program on the CP-SAT solver, the greedy cover
        as hint; single worker so a seed fixes the returned cover
        """
        greedy = self.greedy()
        model = cp_model.CpModel()
        chosen = [model.NewBoolVar('c%d' % i) for i in range(len(self.masks))]
        for cands in self.elem_to_cands:
            model.AddBoolOr([chosen[i] for i in cands])
        model.Minimize(cp_model.LinearExpr.Sum(chosen))
        in_greedy = set(greedy)
        for i, var in enumerate(chosen):
            model.AddHint(var, 1 if i in in_greedy else 0)

        solver = cp_model.CpSolver()
        solver.parameters.max_time_in_seconds = float(time_limit)
        solver.parameters.num_search_workers = 1
        solver.parameters.random_seed = seed
        status = solver.Solve(model)
        nodes = int(solver.NumBranches())

        if status == cp_model.OPTIMAL:
            best = tuple(i for i, var in enumerate(chosen) if solver.Value(var))
            return HittingOutcome(best=best, optimal=True, lower_bound=len(best), nodes=nodes, exhausted=False)
        logger.info('CP-SAT stopped with status %s after %.1fs', solver.StatusName(status), solver.WallTime())
        best = tuple(greedy)
        lower = self._lower(0)
        if status == cp_model.FEASIBLE:
            found = tuple(i for i, var in enumerate(chosen) if solver.Value(var))
            if len(found) < len(best):
                best = found
            lower = max(lower, math.ceil(solver.BestObjectiveBound() - 1e-9))
        return HittingOutcome(best=best, optimal=False, lower_bound=lower, nodes=nodes, exhausted=True)
