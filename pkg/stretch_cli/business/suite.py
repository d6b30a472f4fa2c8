"""验收套件

九项检查逐项运行，每项返回一个 SuiteCheck；随机部分全部由 RunConfig.seed 决定。
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ..branched_surface import FaceClass, branch_equations, enumerate_cycles, flow_graph, pairing
from ..config import RunConfig
from ..cones import (
    INTERIOR,
    OUTSIDE,
    EntropyField,
    RestrictionMap,
    carried_cone,
    compose_maps,
    cone_from_inequalities,
    continuity_probe,
    convexity_probe,
    entropy_field,
    homogeneity_probe,
    image_cone,
    membership,
    same_cone,
    verify_double_description,
)
from ..dynamics import (
    UNIT,
    WEIGHTED,
    SolverOptions,
    WeightedDigraph,
    characteristic_root,
    cut,
    cycle_count_oracle,
    dynamical_core,
    from_flow_graph,
    growth_rate,
    log_slope,
    row_sum_growth,
    stretch_by_component,
)
from ..fixtures import (
    ENDPERIODIC_FIXTURES,
    VEERING_FIXTURES,
    cone_fixture,
    cycle_fixture,
    figure_eight,
    flow_graph_fixture,
    golden_loops,
    projection_to_line,
    random_strongly_connected,
    random_weight_vector,
    ray_truncated_cycles,
    triangulation_fixture,
)
from ..train_track import curated_curves, gf_growth, intersection_growth, transition_graph
from ..utils.debug import log_event

GOLDEN_RATIO = (1 + math.sqrt(5)) / 2
SQUARE_GOLDEN = (3 + math.sqrt(5)) / 2


@dataclass
class SuiteCheck:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


@dataclass
class SuiteReport:
    seed: int
    checks: list[SuiteCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def _perron_exactness(config: RunConfig, rng: np.random.Generator) -> tuple[bool, str]:
    options = SolverOptions.from_run_config(config)
    golden = flow_graph_fixture("golden")
    unit_graph = from_flow_graph(golden)
    started = time.perf_counter()
    unit = growth_rate(unit_graph, UNIT, options)
    elapsed = time.perf_counter() - started
    weighted = growth_rate(from_flow_graph(golden, [1]), WEIGHTED, options)
    oracle = characteristic_root(unit_graph.count_matrix())
    passed = bool(abs(unit.lam - oracle) <= 1e-9 and abs(weighted.lam - GOLDEN_RATIO) <= 1e-9)
    return passed, (
        f"unit λ={unit.lam:.12f}, weighted λ={weighted.lam:.12f}, oracle={oracle:.12f}, "
        f"{elapsed * 1000:.2f} ms"
    )


def _oracle_equivalence(config: RunConfig, rng: np.random.Generator) -> tuple[bool, str]:
    options = SolverOptions.from_run_config(config)
    started = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        graph = random_strongly_connected(rng, max_vertices=6, max_edges=12, max_weight=3)
        lam = growth_rate(graph, WEIGHTED, options).lam
        counts = cycle_count_oracle(graph, WEIGHTED, 40, cap=config.nmax_cap)
        worst = max(worst, abs(math.log(lam) - log_slope(counts, 20, 40, cumulative=True)))
    elapsed = time.perf_counter() - started
    return worst <= 0.05 and elapsed < 60, f"max |log λ - slope| = {worst:.4f} over 200 graphs, {elapsed:.2f} s"


def _edge_growth(config: RunConfig, rng: np.random.Generator) -> tuple[bool, str]:
    options = SolverOptions.from_run_config(config)
    worst = 0.0
    for _ in range(100):
        graph = random_strongly_connected(rng, max_vertices=6, max_edges=12, max_weight=1, loops=True)
        lam = growth_rate(graph, UNIT, options).lam
        estimate = row_sum_growth(graph.count_matrix(exact=True), 40, cap=config.nmax_cap)
        worst = max(worst, abs(math.log(estimate) - math.log(lam)))
    ray_worst = 0.0
    for cycle in ray_truncated_cycles():
        graph = transition_graph(cycle)
        lam = gf_growth(graph, options).lam
        estimate = row_sum_growth(graph.matrix, 40, cap=config.nmax_cap)
        ray_worst = max(ray_worst, abs(math.log(estimate) - math.log(lam)))
    passed = max(worst, ray_worst) <= 0.02
    return passed, f"random graphs {worst:.4f}, ray-truncated fixtures {ray_worst:.4f}"


def _pairing_well_defined(config: RunConfig, rng: np.random.Generator) -> tuple[bool, str]:
    checked = 0
    for name in (*VEERING_FIXTURES, "figure-eight-swapped"):
        triangulation = triangulation_fixture(name)
        phi = flow_graph(triangulation)
        matrix = branch_equations(triangulation)
        basis = cone_from_inequalities(
            triangulation.num_faces, [], matrix.tolist(), cap=config.cone_dimension_cap
        ).lineality
        for cycle in enumerate_cycles(phi, 6):
            for vector in basis:
                canonical = pairing(phi, cycle, vector, matrix=matrix)
                opposite = pairing(phi, cycle, vector, matrix=matrix, opposite_side=True)
                if canonical != opposite:
                    return False, f"{name}: cycle {list(cycle)} pairs {canonical} vs {opposite}"
                checked += 1
    return True, f"{checked} cycle/class pairings agree on {len(VEERING_FIXTURES) + 1} triangulations"


def _pipeline(config: RunConfig, rng: np.random.Generator) -> tuple[bool, str]:
    triangulation = figure_eight()
    fiber = triangulation.metadata["fiber_class"]
    oracle = characteristic_root(triangulation.metadata["monodromy"])
    phi = flow_graph(triangulation)
    summary = stretch_by_component(phi, [0] * triangulation.num_faces, fiber, SolverOptions.from_run_config(config))
    best = summary.best
    if best is None:
        return False, "no component carries dynamics"
    lam = best[1].lam
    passed = bool(abs(lam - oracle) <= 1e-8 and abs(oracle - SQUARE_GOLDEN) <= 1e-12)
    return passed, f"pipeline λ={lam:.12f}, monodromy oracle={oracle:.12f}"


def _cut_core_algebra(config: RunConfig, rng: np.random.Generator) -> tuple[bool, str]:
    triangulation = figure_eight()
    matrix = branch_equations(triangulation)
    phi = flow_graph(triangulation)
    two = flow_graph_fixture("two-component")
    golden = flow_graph_fixture("golden")
    cases = [(phi, eta, matrix) for eta in ([0, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 1], [1, 1, 1, 1])]
    cases += [(two, eta, None) for eta in ([0] * 6, [0, 0, 0, 0, 1, 1], [1] * 6)]
    cases += [(golden, eta, None) for eta in ([0], [1])]

    cycles = 0
    for graph, eta, equations in cases:
        once = cut(graph, eta, matrix=equations)
        if cut(once, eta, matrix=equations).edges != once.edges:
            return False, f"cut is not idempotent on {graph.name} with {eta}"
        core = dynamical_core(once)
        if dynamical_core(core).edges != core.edges:  # type: ignore[union-attr]
            return False, f"core is not idempotent on {graph.name} with {eta}"
        for cycle in enumerate_cycles(once, 6):
            if pairing(once, cycle, FaceClass(tuple(eta))) != 0:
                return False, f"surviving cycle {list(cycle)} pairs nonzero with {eta}"
            cycles += 1

    for _ in range(20):
        size = int(rng.integers(2, 7))
        edges = [(int(u), int(v), 1) for u, v in rng.integers(0, size, size=(8, 2)) if u < v]
        if not dynamical_core(WeightedDigraph(tuple(range(size)), tuple(edges))).is_empty:  # type: ignore[union-attr]
            return False, "a DAG has a nonempty dynamical core"
    return True, f"{len(cases)} cuts idempotent, {cycles} surviving cycles pair to 0, DAG cores empty"


def _intersection_growth(config: RunConfig, rng: np.random.Generator) -> tuple[bool, str]:
    options = SolverOptions.from_run_config(config)
    lines = []
    passed = True
    for name in ("punctured-torus", *ENDPERIODIC_FIXTURES):
        cycle = cycle_fixture(name)
        graph = transition_graph(cycle)
        target = math.log(gf_growth(graph, options).lam)
        carried, transverse = curated_curves(cycle)
        best = max(
            intersection_growth(cycle, c, d, 40, cap=config.nmax_cap, graph=graph).slope
            for c in carried
            for d in transverse
        )
        ok = abs(best - target) <= 0.02 and best <= target + 0.01
        passed = passed and ok
        lines.append(f"{name}: slope {best:.4f} vs log λ {target:.4f}")
    return passed, "; ".join(lines)


def _entropy_fields(config: RunConfig, rng: np.random.Generator) -> list[tuple[str, EntropyField, tuple, list, Callable]]:
    """(name, field, base class, continuity directions, random endpoint sampler)"""
    options = SolverOptions.from_run_config(config)
    triangulation = figure_eight()
    phi = flow_graph(triangulation)
    fiber = tuple(triangulation.metadata["fiber_class"])
    cone = carried_cone(triangulation, cap=config.cone_dimension_cap)
    figure = entropy_field(phi, [0] * triangulation.num_faces, 0, triangulation=triangulation, options=options)

    def cone_point() -> tuple:
        coefficients = rng.integers(1, 6, size=len(cone.rays))
        return tuple(sum(int(a) * r[i] for a, r in zip(coefficients, cone.rays)) for i in range(cone.dim))

    fields = [("figure-eight", figure, fiber, list(cone.rays), cone_point)]
    golden = EntropyField.from_digraph(golden_loops(), options)
    fields.append(("golden-loops", golden, (1, 2), None, lambda: random_weight_vector(rng, 2)))
    for index in range(3):
        graph = random_strongly_connected(rng, vertices=4, max_edges=8, max_weight=3)
        field_ = EntropyField.from_digraph(graph, options)
        base = tuple(w for _, _, w in graph.edges)
        fields.append((f"random-{index}", field_, base, None, lambda f=field_: random_weight_vector(rng, f.dim)))
    return fields


def _entropy_properties(config: RunConfig, rng: np.random.Generator) -> tuple[bool, str]:
    homogeneity = convexity = continuity = 0.0
    for name, field_, base, directions, sampler in _entropy_fields(config, rng):
        homogeneity = max(homogeneity, homogeneity_probe(field_, base, tol=config.homogeneity_tolerance).max_violation)
        for _ in range(20):
            report = convexity_probe(field_, sampler(), sampler(), 9, tol=config.convexity_tolerance)
            convexity = max(convexity, report.max_violation)
        continuity = max(continuity, continuity_probe(field_, base, Fraction(1, 1000), directions).max_violation)
        log_event("suite", f"entropy field {name} probed")
    passed = (
        homogeneity <= config.homogeneity_tolerance
        and convexity <= config.convexity_tolerance
        and continuity <= 0.01
    )
    return passed, f"homogeneity {homogeneity:.2e}, convexity {convexity:.2e}, continuity {continuity:.2e}"


def _cone_engine(config: RunConfig, rng: np.random.Generator) -> tuple[bool, str]:
    cap = config.cone_dimension_cap
    triangulation = figure_eight()
    carried = carried_cone(triangulation, cap=cap)
    cones = {
        "carried": carried,
        "planar": cone_fixture("planar-cone"),
        "pyramid": cone_fixture("pyramid-cone"),
        "half-plane": cone_fixture("half-plane-cone"),
    }
    for name, cone in cones.items():
        report = verify_double_description(cone, cap=cap)
        if not report.ok:
            return False, f"{name}: {report.problems[0]}"

    first = RestrictionMap.from_rows([[1, 0, 0], [0, 1, 1]])
    second = RestrictionMap.from_rows([[1, 1], [0, 1]])
    pyramid = cones["pyramid"]
    stepwise = image_cone(image_cone(pyramid, first, cap=cap), second, cap=cap)
    direct = image_cone(pyramid, compose_maps(first, second), cap=cap)
    if not same_cone(stepwise, direct):
        return False, "image cones do not compose"
    line = image_cone(cones["planar"], projection_to_line(), cap=cap)
    if line.rays != ((Fraction(1),),):
        return False, f"projection of the planar cone gave rays {line.rays}"

    fiber = triangulation.metadata["fiber_class"]
    if membership(carried, fiber) == OUTSIDE or membership(carried, [1, 1, 1, 1]) != INTERIOR:
        return False, "carried cone misses the fiber class"
    return True, f"{len(cones)} cones verified, composition exact, fiber class carried"


CRITERIA: list[tuple[str, Callable[[RunConfig, np.random.Generator], tuple[bool, str]]]] = [
    ("perron-exactness", _perron_exactness),
    ("oracle-equivalence", _oracle_equivalence),
    ("edge-growth", _edge_growth),
    ("pairing-well-defined", _pairing_well_defined),
    ("pipeline-cross-validation", _pipeline),
    ("cut-core-algebra", _cut_core_algebra),
    ("intersection-growth", _intersection_growth),
    ("entropy-properties", _entropy_properties),
    ("cone-engine", _cone_engine),
]


def run_suite(config: RunConfig, *, only: Optional[set[int]] = None) -> SuiteReport:
    """Run criteria 1..9 (or the subset ``only``), each with its own seeded generator."""
    report = SuiteReport(seed=config.seed)
    for number, (name, check) in enumerate(CRITERIA, 1):
        if only and number not in only:
            continue
        rng = np.random.default_rng([config.seed, number])
        started = time.perf_counter()
        try:
            passed, detail = check(config, rng)
        except Exception as exc:  # noqa: BLE001
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - started
        report.checks.append(SuiteCheck(f"{number}. {name}", bool(passed), detail, elapsed))
        log_event("suite", f"{name}: {'pass' if passed else 'fail'}")
    return report
