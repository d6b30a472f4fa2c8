#!/usr/bin/env python
"""
测试 train track 折叠、转移图 G_f 与交数增长
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# 添加项目路径
sys.path.insert(0, str(Path(__file__).parent))

from stretch_cli.dynamics import WeightedDigraph
from stretch_cli.errors import DomainError, InputFormatError
from stretch_cli.fixtures import ENDPERIODIC_FIXTURES, cycle_fixture, fixture_document, ray_truncated_cycles
from stretch_cli.train_track import (
    FoldMove,
    TransitionGraph,
    apply_fold,
    best_intersection_growth,
    composed_matrix,
    curated_curves,
    cycle_from_dict,
    cycle_to_dict,
    gf_growth,
    intersection_growth,
    push_curve,
    switch_conditions_hold,
    track_from_dict,
    transition_graph,
    validate_track,
)

SQUARE_GOLDEN = (3 + math.sqrt(5)) / 2


@pytest.fixture
def torus():
    return cycle_fixture("punctured-torus")


def test_torus_track_is_valid(torus):
    report = validate_track(torus.track)
    assert report.ok
    assert report.lowest_position


def test_track_with_missing_end_is_invalid():
    track = track_from_dict({"branches": [0, 1], "switches": [{"sideA": [[0, 0]], "sideB": [[1, 1]]}]})
    report = validate_track(track)
    assert not report.ok
    assert any("exactly two attached ends" in p for p in report.problems)


def test_single_fold_matrix(torus):
    result = apply_fold(torus.track, FoldMove(0, (1,), 0, "A"))
    assert result.matrix.tolist() == [[1, 1], [0, 1]]
    assert validate_track(result.track).ok


def test_fold_requires_adjacent_branches(torus):
    with pytest.raises(DomainError):
        apply_fold(torus.track, FoldMove(0, (0,), 0, "A"))
    with pytest.raises(DomainError):
        apply_fold(torus.track, FoldMove(0, (1,), 3, "A"))


def test_push_curve(torus):
    folded, image = push_curve(torus.track, [1, 0], FoldMove(0, (1,), 0, "A"))
    assert image == [1, 1]
    assert switch_conditions_hold(folded, image)


def test_composed_matrix(torus):
    assert composed_matrix(torus).tolist() == [[2, 1], [1, 1]]


def test_gf_growth_is_monodromy_root(torus):
    growth = gf_growth(transition_graph(torus))
    assert growth.lam == pytest.approx(SQUARE_GOLDEN, abs=1e-9)
    assert not growth.translation
    assert sorted(growth.component) == [0, 1]


def test_transition_graph_bundles(torus):
    graph = transition_graph(torus)
    assert len(graph.digraph.edges) == 5
    assert graph.non_simple_bundles == 2
    assert graph.counts(3).tolist() == [[13, 8], [8, 5]]


def test_identity_cycle_is_a_translation():
    growth = gf_growth(transition_graph(cycle_fixture("identity")))
    assert growth.lam == 1.0
    assert growth.translation
    assert not growth.empty_core


def test_repelling_ray_alone_has_empty_core():
    growth = gf_growth(transition_graph(cycle_fixture("translation")))
    assert growth.translation
    assert growth.empty_core
    assert growth.lam == 1.0


@pytest.mark.parametrize("name", ENDPERIODIC_FIXTURES)
def test_ray_ends_keep_the_growth(name):
    cycle = cycle_fixture(name)
    graph = transition_graph(cycle)
    assert len(graph.labels) > cycle.track.size
    assert gf_growth(graph).lam == pytest.approx(SQUARE_GOLDEN, abs=1e-9)


def test_ray_truncations_cover_both_directions():
    cycles = ray_truncated_cycles(3)
    assert len(cycles) == 6
    assert {c.rays[0].direction for c in cycles} == {"attracting", "repelling"}


def test_intersection_slope_matches_log_lambda(torus):
    growth = intersection_growth(torus, [1, 1], [1, 1], 40)
    assert len(growth.values) == 40
    assert growth.values[0] == 5
    assert abs(growth.slope - math.log(SQUARE_GOLDEN)) <= 0.01


@pytest.mark.parametrize("name", ["punctured-torus", *ENDPERIODIC_FIXTURES])
def test_best_intersection_growth(name):
    cycle = cycle_fixture(name)
    target = math.log(gf_growth(transition_graph(cycle)).lam)
    best = best_intersection_growth(cycle, 40)
    assert abs(best.slope - target) <= 0.02
    assert best.slope <= target + 0.01


def test_curated_curves_are_carried(torus):
    carried, transverse = curated_curves(torus)
    assert carried == [(1, 1)]
    assert (1, 1) in transverse


def test_intersection_argument_checks(torus):
    with pytest.raises(DomainError):
        intersection_growth(torus, [1, 1, 1], [1, 1], 10)
    with pytest.raises(DomainError):
        intersection_growth(torus, [1, 1], [1, -1], 10)
    with pytest.raises(DomainError):
        intersection_growth(torus, [1, 1], [1, 1], 500)


def test_relabel_must_be_a_bijection():
    document = fixture_document("punctured-torus")
    document["relabel"] = [0, 0]
    with pytest.raises(DomainError):
        composed_matrix(cycle_from_dict(document))


def test_malformed_track_document():
    with pytest.raises(InputFormatError):
        track_from_dict({"branches": [0, 1]})


def test_cycle_document_round_trip(torus):
    assert cycle_from_dict(cycle_to_dict(torus)) == torus


GOLDEN = (1 + math.sqrt(5)) / 2


def _graph_from_matrix(matrix, labels):
    """按矩阵条目展开成多重边，与 transition_graph 的做法一致"""
    exact = np.array(matrix, dtype=object)
    edges = tuple(
        (i, j, 1) for i, row in enumerate(exact.tolist()) for j, count in enumerate(row) for _ in range(int(count))
    )
    simple = tuple(sum(int(x) for x in exact[i]) == 1 for i, _, _ in edges)
    return TransitionGraph(tuple(labels), exact, WeightedDigraph(tuple(range(len(labels))), edges), simple)


def _disjoint_union(first, second):
    n, size = len(first.labels), len(first.labels) + len(second.labels)
    matrix = np.zeros((size, size), dtype=object)
    matrix[:n, :n] = first.matrix
    matrix[n:, n:] = second.matrix
    labels = (*first.labels, *(1000 + label for label in second.labels))
    return _graph_from_matrix(matrix, labels)


@pytest.mark.parametrize("other", ["golden", "identity"])
def test_gf_growth_of_disjoint_union_is_the_max(torus, other):
    """不交并的增长率取两块中较大者，分量落在 torus 那一块"""
    second = (
        _graph_from_matrix([[1, 1], [1, 0]], [0, 1])
        if other == "golden"
        else transition_graph(cycle_fixture("identity"))
    )
    first = transition_graph(torus)
    union = gf_growth(_disjoint_union(first, second))
    assert union.lam == pytest.approx(max(gf_growth(first).lam, gf_growth(second).lam), abs=1e-9)
    assert union.lam == pytest.approx(SQUARE_GOLDEN, abs=1e-9)
    assert sorted(union.component) == [0, 1]


def test_gf_growth_of_golden_block():
    assert gf_growth(_graph_from_matrix([[1, 1], [1, 0]], [0, 1])).lam == pytest.approx(GOLDEN, abs=1e-9)


@pytest.mark.parametrize("length", [1, 3, 5])
def test_attracting_ray_branch_has_flat_intersections(length):
    """吸引射线上的分支不回流到 track：交数恒为 1，斜率为 0"""
    cycle = next(
        c
        for c in ray_truncated_cycles(5)
        if c.rays[0].direction == "attracting" and len(c.rays[0].branches) == length
    )
    size = len(cycle.labels)
    carried = [int(i == cycle.track.size) for i in range(size)]
    growth = intersection_growth(cycle, carried, [1] * size, 40)
    assert set(growth.values) == {1}
    assert growth.slope == pytest.approx(0.0, abs=1e-12)
    assert best_intersection_growth(cycle, 40).slope > 0.9
