#!/usr/bin/python
# _*_ coding: utf-8 _*_

"""
projection, duality, (p,q) verification, piercing bounds and certificates

@time  : 2026/10/17 14:26
"""
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from hd_workbench.errors import DomainError, PreconditionError
from hd_workbench.grid_core import GridSpec, collinear_groups, is_collinear
from hd_workbench.param_plan import choose_parameters
from hd_workbench.planar import (ASYMPTOTIC_BANNER, LineFamily, Verdict, collinear_triples, concurrency_bundles,
                                 concurrency_histogram, dualize, emit_certificate, intersection, max_concurrency,
                                 piercing_number, project_to_plane, verify_pq_property)
from hd_workbench.randcon import RandomSubsetRun, run_construction, verify_no_u_collinear
from hd_workbench.report import validate
from utils.common import hash_points


def _generic_lines():
    # slopes and offsets chosen so that no three meet
    return LineFamily.from_lines([(0, 0), (1, 3), (2, -5), (5, 7)])


def test_projection_keeps_planar_generic_input():
    pts = [(1, 2), (2, 5), (4, 1), (7, 3)]
    planar = project_to_plane(pts)
    assert planar.attempts == 1
    assert planar.coeff_a == (1, 0) and planar.coeff_b == (0, 1)
    assert planar.shear == 0
    assert sorted(planar.points) == sorted(pts)


def test_projection_of_collinear_triple_in_3d():
    planar = project_to_plane([(1, 1, 1), (2, 3, 5), (3, 5, 9)], seed=4)
    assert is_collinear(planar.points)
    assert len(set(p[0] for p in planar.points)) == 3


def test_projection_of_generic_3d_points():
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    planar = project_to_plane(pts, seed=2)
    assert collinear_triples(planar.points) == []


def test_projection_preserves_collinear_groups_of_a_grid():
    grid = list(GridSpec(3, 3).points())
    planar = project_to_plane(grid, seed=1)
    image = dict(zip(planar.source, planar.points))
    src_groups = {tuple(sorted(image[p] for p in g)) for g in collinear_groups(grid, 3)}
    assert src_groups == set(collinear_groups(planar.points, 3))
    assert len(set(p[0] for p in planar.points)) == len(planar.points)


def test_projection_needs_points():
    with pytest.raises(PreconditionError):
        project_to_plane([])


def test_dual_of_diagonal_is_concurrent():
    family = dualize([(1, 1), (2, 2), (3, 3)])
    assert family.lines == ((1, 1), (2, 2), (3, 3))
    bundles = concurrency_bundles(family)
    assert bundles == [((Fraction(1), Fraction(0)), (0, 1, 2))]
    assert max_concurrency(family) == 3


def test_dual_of_non_collinear_triple():
    family = dualize([(0, 0), (1, 2), (3, 1)])
    points = {pt for pt, _ in concurrency_bundles(family)}
    assert len(points) == 3
    assert max_concurrency(family) == 2


def test_dual_of_two_points():
    family = dualize([(1, 1), (2, 3)])
    assert len(family) == 2
    assert max_concurrency(family) == 2


def test_dualize_rejects_vertical_groups():
    with pytest.raises(DomainError):
        dualize([(1, 1), (1, 2), (1, 3)])


def test_line_family_rejects_duplicates():
    with pytest.raises(DomainError):
        LineFamily.from_lines([(1, 1), (1, 1)])
    assert LineFamily.from_json(_generic_lines().to_json()) == _generic_lines()


def test_intersection_exact():
    assert intersection((Fraction(1), Fraction(1)), (Fraction(3), Fraction(2))) == (Fraction(1, 2), Fraction(-1, 2))
    assert intersection((Fraction(1), Fraction(1)), (Fraction(1), Fraction(5))) is None


def test_concurrency_histogram():
    hist = concurrency_histogram(dualize(project_to_plane(list(GridSpec(3, 2).points()))))
    assert list(hist.columns) == ['lines_through', 'points']
    assert hist['lines_through'].max() == 3
    assert int(hist.loc[hist['lines_through'] == 3, 'points'].iloc[0]) == 8


def test_pq_proved_for_concurrent_lines():
    family = LineFamily.from_lines([(a, a) for a in range(1, 4)])
    result = verify_pq_property(family, p=3, q=3)
    assert result.verdict == Verdict.PROVED
    assert result.max_free == 2


def test_pq_refuted_for_general_position():
    family = _generic_lines()
    result = verify_pq_property(family, p=4, q=3)
    assert result.verdict == Verdict.REFUTED
    assert sorted(result.witness) == [0, 1, 2, 3]


def test_pq_matches_brute_force_on_grid_dual():
    family = dualize(project_to_plane(list(GridSpec(3, 2).points())))
    bundles = [set(idx) for _, idx in concurrency_bundles(family) if len(idx) >= 3]
    best = 0
    for size in range(len(family), 0, -1):
        if any(all(len(set(c) & b) <= 2 for b in bundles) for c in itertools.combinations(range(len(family)), size)):
            best = size
            break
    assert best == 6
    assert verify_pq_property(family, p=7, q=3).verdict == Verdict.PROVED
    assert verify_pq_property(family, p=6, q=3).verdict == Verdict.REFUTED


def test_pq_domain():
    with pytest.raises(DomainError):
        verify_pq_property(_generic_lines(), p=2, q=3)


def test_piercing_examples():
    concurrent = piercing_number(LineFamily.from_lines([(a, a) for a in range(1, 4)]))
    assert concurrent.exact == 1
    generic = piercing_number(_generic_lines())
    assert generic.exact == 2
    assert generic.lower == 2
    assert len(generic.piercing_points) == 2


def test_piercing_covers_parallel_lines():
    family = LineFamily.from_lines([(1, 0), (1, 1), (1, 2)])
    result = piercing_number(family)
    assert result.exact == 3
    assert result.greedy_upper == 3


def test_piercing_of_grid_dual():
    family = dualize(project_to_plane(list(GridSpec(3, 2).points())))
    result = piercing_number(family)
    assert result.max_concurrency == 3
    assert result.lower == 3
    assert result.exact >= 3
    assert result.lower <= result.exact <= result.greedy_upper
    for a, b in family.lines:
        assert any(a * x - b == y for x, y in result.piercing_points)


def _trivial_run():
    pts = ((1, 1), (2, 2), (3, 3))
    return RandomSubsetRun(grid=GridSpec(3, 2), alpha=1.0, seed=0, u=4, sample=pts, deleted=(), survivors=pts)


def test_certificate_for_trivial_run():
    plan = choose_parameters(3, Fraction(2, 5))
    cert = emit_certificate(_trivial_run(), plan, p=3)
    assert cert.pq.verdict == Verdict.PROVED
    assert cert.piercing.exact == 1
    assert cert.banner == ASYMPTOTIC_BANNER
    assert cert.ideal_T == plan.T
    validate(cert.to_json(), 'certificate')


def test_certificate_for_desk_run():
    plan = choose_parameters(3, Fraction(2, 5))
    run = run_construction(GridSpec(3, plan.k), float(3) ** float(plan.alpha_exp), seed=5, u=plan.u)
    cert = emit_certificate(run, plan, budget=20000)
    obj = cert.to_json()
    assert obj['q'] == 3 and obj['u'] == 5
    assert obj['p'] == max(3, math.ceil(3 ** float(plan.p_exp)))
    assert obj['pq_verified']['verdict'] in ('proved', 'refuted', 'unknown')
    assert obj['provenance']['survivors_hash'] == hash_points(run.survivors)
    assert obj['banner'] == ASYMPTOTIC_BANNER
    assert Fraction(obj['piercing_lower']) == Fraction(len(run.survivors), 4)


@pytest.mark.parametrize('seed', range(200))
def test_duality_maps_collinear_groups_to_bundles(seed):
    rng = np.random.default_rng(seed)
    size = int(rng.integers(3, 41))
    raw = {(int(x), int(y)) for x, y in rng.integers(0, 7, size=(size, 2))}
    planar = project_to_plane(sorted(raw), seed=seed)
    family = dualize(planar)
    index = {p: i for i, p in enumerate(planar.points)}
    groups = {tuple(sorted(index[p] for p in g)) for g in collinear_groups(planar.points, 2)}
    bundles = {idx for _, idx in concurrency_bundles(family)}
    assert groups == bundles


def test_end_to_end_certificate():
    plan = choose_parameters(3, Fraction(2, 5))
    run = run_construction(GridSpec(6, plan.k), 6.0 ** float(plan.alpha_exp), seed=1, u=plan.u)
    assert verify_no_u_collinear(run.survivors, plan.u)
    cert = emit_certificate(run, plan, budget=2000)
    obj = validate(cert.to_json(), 'certificate')
    assert obj['banner'] == ASYMPTOTIC_BANNER
    assert Fraction(obj['ideal_T']['value']) == plan.T

    # p lines with no q through a common point
    assert cert.pq.verdict == Verdict.REFUTED
    witness = set(cert.pq.witness)
    assert len(witness) == cert.p
    for _, idx in concurrency_bundles(cert.family):
        assert len(witness & set(idx)) <= cert.q - 1

    assert cert.max_concurrency <= plan.u - 1
    assert cert.piercing.exact is not None
    assert obj['piercing_exact'] == cert.piercing.exact
    assert cert.piercing.exact >= math.ceil(Fraction(len(cert.family), plan.u - 1))
    assert math.ceil(cert.piercing.lower) <= cert.piercing.exact <= cert.piercing.greedy_upper
    assert len(cert.piercing.piercing_points) == cert.piercing.exact
    for a, b in cert.family.lines:
        assert any(a * x - b == y for x, y in cert.piercing.piercing_points)
