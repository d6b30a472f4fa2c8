#!/usr/bin/env python
"""
测试切割、动力核与 Perron 增长率

黄金比例图与 figure-eight 的数值都有手算的闭式解。
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# 添加项目路径
sys.path.insert(0, str(Path(__file__).parent))

from stretch_cli.branched_surface import enumerate_cycles, flow_graph, pairing
from stretch_cli.dynamics import (
    UNIT,
    WEIGHTED,
    SolverOptions,
    WeightedDigraph,
    characteristic_root,
    cut,
    cut_components,
    cycle_count_oracle,
    dynamical_core,
    exact_power,
    find_zero_weight_cycle,
    from_flow_graph,
    growth_rate,
    log_slope,
    restrict_phi_N,
    row_sum_growth,
    stretch_by_component,
    weighted_digraph_from_dict,
)
from stretch_cli.errors import DomainError, EmptyCoreError, InputFormatError, NonConvergenceError, ZeroWeightCycleError
from stretch_cli.fixtures import (
    LAYERED_WORDS,
    figure_eight,
    flow_graph_fixture,
    golden_loops,
    random_strongly_connected,
    triangulation_fixture,
)
from stretch_cli.utils.debug import get_trace_path, is_trace_enabled, set_trace_enabled

GOLDEN = (1 + math.sqrt(5)) / 2
SQUARE_GOLDEN = (3 + math.sqrt(5)) / 2


def test_golden_loops_weighted():
    """t + t^2 = 1 的根倒数就是黄金比例"""
    result = growth_rate(golden_loops(), WEIGHTED)
    assert result.lam == pytest.approx(GOLDEN, abs=1e-9)
    assert result.t_star == pytest.approx(1 / GOLDEN, abs=1e-9)
    assert result.residual <= 1e-9
    assert not result.bounded


def test_golden_flow_graph_unit_matches_characteristic_root():
    graph = from_flow_graph(flow_graph_fixture("golden"))
    result = growth_rate(graph, UNIT)
    assert result.lam == pytest.approx(GOLDEN, abs=1e-9)
    assert characteristic_root(graph.count_matrix()) == pytest.approx(GOLDEN, abs=1e-9)
    assert result.right_vector and all(x > 0 for x in result.right_vector)


def test_unit_and_weighted_agree_for_unit_weights():
    graph = from_flow_graph(flow_graph_fixture("golden"), [1])
    assert growth_rate(graph, WEIGHTED).lam == pytest.approx(growth_rate(graph, UNIT).lam, abs=1e-9)


def test_scaling_weights_takes_a_root():
    base = growth_rate(golden_loops(), WEIGHTED).lam
    doubled = growth_rate(golden_loops().scaled(2), WEIGHTED).lam
    assert doubled == pytest.approx(math.sqrt(base), abs=1e-9)


def test_single_cycle_is_bounded():
    graph = WeightedDigraph.from_edges([(0, 1, 1), (1, 0, 1)])
    result = growth_rate(graph, UNIT)
    assert result.bounded
    assert result.lam == 1.0


def test_dag_has_empty_core():
    graph = WeightedDigraph.from_edges([(0, 1), (1, 2), (0, 2)])
    assert dynamical_core(graph).is_empty
    with pytest.raises(EmptyCoreError):
        growth_rate(graph, UNIT)


def test_zero_weight_cycle_has_witness():
    graph = WeightedDigraph.from_edges([(0, 1, 0), (1, 0, 0), (0, 0, 1)])
    assert sorted(find_zero_weight_cycle(graph)) == [0, 1]
    with pytest.raises(ZeroWeightCycleError) as excinfo:
        growth_rate(graph, WEIGHTED)
    assert sorted(excinfo.value.cycle) == [0, 1]
    assert excinfo.value.exit_code == 2


def test_negative_weight_rejected():
    with pytest.raises(DomainError):
        WeightedDigraph.from_edges([(0, 0, -1)])


def test_unknown_mode_rejected():
    with pytest.raises(DomainError):
        growth_rate(golden_loops(), "by-colour")


def test_bisection_cap_reports_non_convergence():
    options = SolverOptions(tol=1e-15, interval_width=0.0, bisection_cap=3)
    with pytest.raises(NonConvergenceError) as excinfo:
        growth_rate(golden_loops(), WEIGHTED, options)
    assert excinfo.value.exit_code == 3


def test_cycle_counts_unit_are_lucas_numbers():
    graph = from_flow_graph(flow_graph_fixture("golden"))
    assert cycle_count_oracle(graph, UNIT, 6) == [1, 3, 4, 7, 11, 18]


def test_cycle_counts_weighted_are_fibonacci():
    assert cycle_count_oracle(golden_loops(), WEIGHTED, 6) == [1, 2, 3, 5, 8, 13]


def test_cycle_count_cap():
    with pytest.raises(DomainError):
        cycle_count_oracle(golden_loops(), WEIGHTED, 50, cap=40)


def test_log_slope_tracks_growth():
    counts = cycle_count_oracle(golden_loops(), WEIGHTED, 40)
    assert log_slope(counts, 20, 40) == pytest.approx(math.log(GOLDEN), abs=1e-3)


def test_cumulative_slope_on_banded_counts():
    """权重 5、6 的两个自环：计数成带状出现，累积和仍给出正确斜率"""
    graph = golden_loops(5, 6)
    counts = cycle_count_oracle(graph, WEIGHTED, 40)
    assert counts[:12] == [0, 0, 0, 0, 1, 1, 0, 0, 0, 1, 2, 1]
    target = math.log(growth_rate(graph, WEIGHTED).lam)
    assert abs(log_slope(counts, 20, 40, cumulative=True) - target) <= 0.01


def test_exact_power_stays_integral():
    power = exact_power([[1, 1], [1, 0]], 90)
    assert int(power[0, 1]) == 2880067194370816120  # F(90)


def test_row_sum_growth_from_above():
    estimate = row_sum_growth([[2, 1], [1, 1]], 40)
    assert estimate >= SQUARE_GOLDEN - 1e-12
    assert math.log(estimate) - math.log(SQUARE_GOLDEN) <= 0.02


def test_random_graph_matches_exact_counts():
    rng = np.random.default_rng(11)
    graph = random_strongly_connected(rng, max_vertices=4, max_edges=8, max_weight=2, loops=True)
    lam = growth_rate(graph, WEIGHTED).lam
    counts = cycle_count_oracle(graph, WEIGHTED, 40)
    assert abs(math.log(lam) - log_slope(counts, 20, 40)) <= 0.05


def test_figure_eight_unit_growth():
    graph = from_flow_graph(flow_graph(figure_eight()))
    assert growth_rate(graph, UNIT).lam == pytest.approx(3.0, abs=1e-9)


def test_figure_eight_fiber_stretch():
    triangulation = figure_eight()
    summary = stretch_by_component(flow_graph(triangulation), [0, 0, 0, 0], [1, 1, 0, 0])
    assert len(summary.components) == 1
    index, result = summary.best
    assert index == 0
    assert result.lam == pytest.approx(SQUARE_GOLDEN, abs=1e-8)
    assert result.lam == pytest.approx(characteristic_root(triangulation.metadata["monodromy"]), abs=1e-8)


def test_cut_is_idempotent_and_cycles_pair_to_zero():
    phi = flow_graph(figure_eight())
    for eta in ([1, 1, 0, 0], [0, 0, 1, 1], [1, 1, 1, 1]):
        once = cut(phi, eta)
        assert cut(once, eta).edges == once.edges
        for cycle in enumerate_cycles(once, 6):
            assert pairing(once, cycle, eta) == 0


def test_cut_by_interior_class_removes_everything():
    phi = flow_graph(figure_eight())
    assert dynamical_core(cut(phi, [1, 1, 1, 1])).edges == ()


def test_two_component_cut():
    """切掉面 4、5 后剩两块，增长率分别是 √2 与 √3"""
    graph = flow_graph_fixture("two-component")
    eta = [0, 0, 0, 0, 1, 1]
    components = cut_components(graph, eta)
    assert components == [frozenset({0, 1}), frozenset({2, 3})]

    core = dynamical_core(cut(graph, eta))
    assert len(restrict_phi_N(core, components, 0).edges) == 3
    assert len(restrict_phi_N(core, components, 1).edges) == 4
    with pytest.raises(DomainError):
        restrict_phi_N(core, components, 2)

    summary = stretch_by_component(graph, eta, [1] * 6)
    assert summary.results[0].lam == pytest.approx(math.sqrt(2), abs=1e-9)
    assert summary.results[1].lam == pytest.approx(math.sqrt(3), abs=1e-9)
    assert summary.best[0] == 1


def test_stretch_without_dual_metadata_uses_one_component():
    """手工图的边没有所属四面体，分支里不出现 -1"""
    summary = stretch_by_component(flow_graph_fixture("golden"), [0], [1])
    assert summary.components == [frozenset()]
    assert summary.best[1].lam == pytest.approx(GOLDEN, abs=1e-9)


def test_weighted_digraph_document():
    graph = weighted_digraph_from_dict({"edges": [[0, 0, 1], [0, 0, 2]]})
    assert graph == golden_loops()
    assert growth_rate(graph, WEIGHTED).lam == pytest.approx(GOLDEN, abs=1e-9)
    assert weighted_digraph_from_dict({"edges": [[0, 1], [1, 0]], "vertices": [0, 1, 2]}).vertices == (0, 1, 2)
    with pytest.raises(InputFormatError):
        weighted_digraph_from_dict({"vertices": [0]})


def test_adding_an_edge_never_lowers_growth():
    """加一条边只会多出圈，λ 不降"""
    rng = np.random.default_rng(5)
    for _ in range(20):
        graph = random_strongly_connected(rng, max_vertices=5, max_edges=10, max_weight=3, loops=True)
        u, v = (graph.vertices[int(i)] for i in rng.integers(len(graph.vertices), size=2))
        grown = WeightedDigraph(graph.vertices, graph.edges + ((u, v, int(rng.integers(1, 4))),))
        for mode in (UNIT, WEIGHTED):
            assert growth_rate(grown, mode).lam >= growth_rate(graph, mode).lam - 1e-9


def test_heavier_edge_never_raises_growth():
    rng = np.random.default_rng(6)
    for _ in range(20):
        graph = random_strongly_connected(rng, max_vertices=5, max_edges=10, max_weight=3, loops=True)
        index = int(rng.integers(len(graph.edges)))
        heavier = WeightedDigraph(
            graph.vertices,
            tuple((u, v, w + 2 if i == index else w) for i, (u, v, w) in enumerate(graph.edges)),
        )
        assert growth_rate(heavier, WEIGHTED).lam <= growth_rate(graph, WEIGHTED).lam + 1e-9


@pytest.mark.parametrize("word", LAYERED_WORDS)
def test_layered_fiber_stretch_matches_monodromy(word):
    """分层丛的纤维类：λ 等于单值矩阵的 Perron 根"""
    triangulation = triangulation_fixture(f"layered-{word}")
    fiber = triangulation.metadata["fiber_class"]
    summary = stretch_by_component(flow_graph(triangulation), [0] * triangulation.num_faces, fiber)
    oracle = characteristic_root(triangulation.metadata["monodromy"])
    assert summary.best[1].lam == pytest.approx(oracle, rel=1e-8)


@pytest.fixture
def trace_file(tmp_path):
    previous = (is_trace_enabled(), get_trace_path())
    path = tmp_path / "trace.log"
    set_trace_enabled(True, path)
    yield path
    set_trace_enabled(*previous)


def test_cut_without_equations_is_traced(trace_file):
    """没有分支方程时只检查符号，并在追踪里留下记录"""
    cut(flow_graph(figure_eight()), [1, 1, 0, 0])
    assert "carried: no branch equations" in trace_file.read_text(encoding="utf-8")


def test_components_of_a_triangulation_check_equations():
    triangulation = figure_eight()
    assert cut_components(triangulation, [1, 1, 0, 0]) == cut_components(flow_graph(triangulation), [1, 1, 0, 0])
    with pytest.raises(DomainError):
        cut_components(triangulation, [1, 0, 0, 0])
