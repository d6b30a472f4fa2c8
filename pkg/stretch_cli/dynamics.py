"""Cutting, dynamical cores, component restriction and cycle growth rates.

Floating point appears only in the Perron solver; the cycle-count and row-sum oracles
work with exact Python integers (numpy object arrays).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Optional, Sequence

import networkx as nx
import numpy as np

from .branched_surface import DualGraph, FaceClass, FlowGraph
from .errors import (
    DomainError,
    EmptyCoreError,
    InputFormatError,
    NonConvergenceError,
    ZeroWeightCycleError,
)
from .triangulation import VeeringTriangulation
from .utils.debug import log_event

UNIT = "unit"
WEIGHTED = "weighted"


@dataclass(frozen=True)
class WeightedDigraph:
    """Directed multigraph with nonnegative integer edge weights.

    ``origin[i]`` remembers which flow graph edge produced edge ``i`` (if any).
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    origin: tuple[Optional[int], ...] = ()

    def __post_init__(self) -> None:
        known = set(self.vertices)
        for u, v, w in self.edges:
            if u not in known or v not in known:
                raise DomainError(f"edge ({u}, {v}) leaves the vertex set")
            if w < 0:
                raise DomainError(f"edge ({u}, {v}) has negative weight {w}")
        if not self.origin:
            object.__setattr__(self, "origin", tuple(range(len(self.edges))))

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], vertices: Optional[Iterable[int]] = None) -> "WeightedDigraph":
        triples = tuple((int(e[0]), int(e[1]), int(e[2]) if len(e) > 2 else 1) for e in edges)
        if vertices is None:
            vertices = sorted({x for u, v, _ in triples for x in (u, v)})
        return cls(tuple(vertices), triples)

    @property
    def is_empty(self) -> bool:
        return not self.edges

    def scaled(self, factor: int) -> "WeightedDigraph":
        return WeightedDigraph(self.vertices, tuple((u, v, w * factor) for u, v, w in self.edges), self.origin)

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for index, (u, v, w) in enumerate(self.edges):
            graph.add_edge(u, v, key=index, weight=w)
        return graph

    def count_matrix(self, weight: Optional[int] = None, *, exact: bool = False) -> np.ndarray:
        """Adjacency counts, optionally restricted to edges of one weight."""
        index = {v: i for i, v in enumerate(self.vertices)}
        size = len(self.vertices)
        matrix = np.zeros((size, size), dtype=object if exact else float)
        if exact:
            matrix[:, :] = 0
        for u, v, w in self.edges:
            if weight is None or w == weight:
                matrix[index[u], index[v]] += 1
        return matrix

    def to_dict(self) -> dict[str, Any]:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}


def weighted_digraph_from_dict(document: Mapping[str, Any]) -> WeightedDigraph:
    try:
        raw_edges = document["edges"]
        return WeightedDigraph.from_edges(raw_edges, document.get("vertices"))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputFormatError("weighted digraph needs 'edges': [[u, v, w], ...]") from exc


def from_flow_graph(
    graph: FlowGraph,
    xi: Optional[FaceClass | Sequence[int]] = None,
    *,
    opposite_side: bool = False,
) -> WeightedDigraph:
    """Weight each flow edge by its pairing with ``xi`` (unit weights when ``xi`` is None)."""
    triples = []
    for edge in graph.edges:
        if xi is None:
            weight: Any = 1
        else:
            weights = xi.weights if isinstance(xi, FaceClass) else tuple(xi)
            weight = edge.pair(weights, opposite_side=opposite_side)
        if isinstance(weight, Fraction):
            if weight.denominator != 1:
                raise DomainError("edge weights must be integral; rescale the class first")
            weight = int(weight)
        triples.append((edge.src, edge.dst, int(weight)))
    return WeightedDigraph(tuple(range(graph.num_vertices)), tuple(triples))


# ---------------------------------------------------------------------------
# cutting, cores, components


def _carried_weights(eta: FaceClass | Sequence[Any], num_faces: int, matrix: Optional[np.ndarray]) -> tuple:
    cls = eta if isinstance(eta, FaceClass) else FaceClass(tuple(eta))
    if len(cls.weights) != num_faces:
        raise DomainError(f"class has {len(cls.weights)} weights, expected {num_faces}")
    if not cls.carried or not cls.satisfies(matrix):
        raise DomainError("cutting class is not carried")
    if matrix is None:
        log_event("carried", f"no branch equations; only signs of {list(cls.weights)} checked")
    return cls.weights


def cut(graph: FlowGraph, eta: FaceClass | Sequence[Any], *, matrix: Optional[np.ndarray] = None) -> FlowGraph:
    """Delete every flow edge whose crossing word meets a face of positive weight."""
    weights = _carried_weights(eta, graph.num_faces, matrix)
    kept = [e for e in graph.edges if all(weights[f] == 0 for f in e.faces())]
    log_event("cut", f"{len(graph.edges)} -> {len(kept)} edges")
    return graph.with_edges(kept)


def _core_indices(vertices: Iterable[int], pairs: Sequence[tuple[int, int]]) -> list[int]:
    digraph = nx.DiGraph()
    digraph.add_nodes_from(vertices)
    digraph.add_edges_from(pairs)
    component_of = {}
    for label, component in enumerate(nx.strongly_connected_components(digraph)):
        for vertex in component:
            component_of[vertex] = label
    # an edge lies on a directed cycle iff both ends share a component (self-loops included)
    return [i for i, (u, v) in enumerate(pairs) if component_of[u] == component_of[v]]


def dynamical_core(graph: WeightedDigraph | FlowGraph) -> WeightedDigraph | FlowGraph:
    """Keep the edges lying on directed cycles: both ends in one strongly connected component."""
    if isinstance(graph, FlowGraph):
        pairs = [(e.src, e.dst) for e in graph.edges]
        keep = _core_indices(range(graph.num_vertices), pairs)
        return graph.with_edges(graph.edges[i] for i in keep)
    pairs = [(u, v) for u, v, _ in graph.edges]
    keep = _core_indices(graph.vertices, pairs)
    vertices = sorted({x for i in keep for x in pairs[i]})
    return WeightedDigraph(
        tuple(vertices),
        tuple(graph.edges[i] for i in keep),
        tuple(graph.origin[i] for i in keep),
    )


def _as_dual(source: DualGraph | FlowGraph | VeeringTriangulation) -> DualGraph:
    if isinstance(source, DualGraph):
        return source
    if isinstance(source, FlowGraph):
        if source.dual is None:
            raise DomainError("flow graph carries no dual graph metadata; components need it")
        return source.dual
    from .branched_surface import dual_graph

    return dual_graph(source)


def cut_components(
    source: DualGraph | FlowGraph | VeeringTriangulation,
    eta: FaceClass | Sequence[Any],
    *,
    matrix: Optional[np.ndarray] = None,
) -> list[frozenset[int]]:
    """Components of the undirected dual graph after removing faces with positive weight.

    A triangulation supplies its own branch equations when ``matrix`` is not given.
    """
    if matrix is None and isinstance(source, VeeringTriangulation):
        from .branched_surface import branch_equations

        matrix = branch_equations(source)
    gamma = _as_dual(source)
    weights = _carried_weights(eta, len(gamma.edges), matrix)
    graph = gamma.to_networkx()
    graph.remove_edges_from(
        (below, above, face) for face, (below, above) in enumerate(gamma.edges) if weights[face] != 0
    )
    components = sorted((frozenset(c) for c in nx.weakly_connected_components(graph)), key=min)
    log_event("components", [sorted(c) for c in components])
    return components


def restrict_phi_N(
    core: FlowGraph, components: Sequence[frozenset[int]], component: int
) -> FlowGraph:
    """Edges of the core lying in one cut component (owning tet, host tet and crossed faces)."""
    if not 0 <= component < len(components):
        raise DomainError(f"component id {component} out of range 0..{len(components) - 1}")
    if core.dual_edges is None:
        raise DomainError("flow graph carries no dual graph metadata; components need it")
    chosen = components[component]

    def inside(edge) -> bool:
        if edge.tet not in chosen:
            return False
        if edge.src_tet is not None and edge.src_tet not in chosen:
            return False
        return all(set(core.dual_edges[f]) <= chosen for f in edge.faces())

    return core.with_edges(e for e in core.edges if inside(e))


# ---------------------------------------------------------------------------
# growth rates


@dataclass(frozen=True)
class GrowthResult:
    lam: float
    t_star: float
    residual: float
    iterations: int
    mode: str = UNIT
    right_vector: tuple[float, ...] = ()
    left_vector: tuple[float, ...] = ()
    core_vertices: tuple[int, ...] = ()
    core_edges: int = 0
    bounded: bool = False  # nonempty core but cycle counts stay bounded

    @property
    def entropy(self) -> float:
        return math.log(self.lam)

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda": self.lam,
            "log_lambda": self.entropy,
            "t_star": self.t_star,
            "residual": self.residual,
            "iterations": self.iterations,
            "mode": self.mode,
            "core_edges": self.core_edges,
            "bounded": self.bounded,
        }


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-12
    interval_width: float = 1e-14
    power_iteration_cap: int = 100_000
    bisection_cap: int = 400

    @classmethod
    def from_run_config(cls, config: Any) -> "SolverOptions":
        return cls(config.tol, config.interval_width, config.power_iteration_cap, config.bisection_cap)


def transfer_matrix(graph: WeightedDigraph, t: float) -> np.ndarray:
    index = {v: i for i, v in enumerate(graph.vertices)}
    size = len(graph.vertices)
    matrix = np.zeros((size, size))
    for u, v, w in graph.edges:
        matrix[index[u], index[v]] += t**w
    return matrix


def spectral_radius(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(matrix, dtype=float)))))


def power_iteration(matrix: np.ndarray, *, tol: float = 1e-12, cap: int = 100_000) -> tuple[np.ndarray, int, bool]:
    """Positive eigenvector estimate of a nonnegative matrix.

    Iterates on ``M + I`` so that periodic (imprimitive) blocks still converge.
    """
    size = matrix.shape[0]
    shifted = np.asarray(matrix, dtype=float) + np.eye(size)
    vector = np.ones(size) / size
    for iteration in range(1, cap + 1):
        image = shifted @ vector
        norm = image.sum()
        if norm == 0:
            return vector, iteration, False
        image /= norm
        if np.abs(image - vector).sum() <= tol:
            return image, iteration, True
        vector = image
    return vector, cap, False


def find_zero_weight_cycle(graph: WeightedDigraph) -> Optional[list[int]]:
    """Edge indices of a directed cycle made of weight-0 edges, or None."""
    zero = graph.to_networkx()
    zero.remove_edges_from((u, v, index) for index, (u, v, w) in enumerate(graph.edges) if w != 0)
    try:
        cycle = nx.find_cycle(zero)
    except nx.NetworkXNoCycle:
        return None
    return [key for _, _, key in cycle]


def _certificate(matrix: np.ndarray, rho: float, options: SolverOptions) -> tuple[tuple, tuple, int]:
    right, iterations, _ = power_iteration(matrix, tol=options.tol, cap=options.power_iteration_cap)
    left, more, _ = power_iteration(matrix.T, tol=options.tol, cap=options.power_iteration_cap)
    return tuple(right.tolist()), tuple(left.tolist()), iterations + more


def growth_rate(
    graph: WeightedDigraph,
    mode: str = UNIT,
    options: Optional[SolverOptions] = None,
) -> GrowthResult:
    """Exponential growth rate of directed cycles, by length (unit) or by total weight."""
    options = options or SolverOptions()
    if mode not in (UNIT, WEIGHTED):
        raise DomainError(f"unknown growth mode {mode!r}")
    core = dynamical_core(graph)
    assert isinstance(core, WeightedDigraph)
    if core.is_empty:
        raise EmptyCoreError("growth rate is undefined on an empty dynamical core")

    if mode == UNIT:
        counts = core.count_matrix()
        rho = max(spectral_radius(counts), 1.0)
        right, left, iterations = _certificate(counts, rho, options)
        bounded = rho <= 1.0 + options.tol
        result = GrowthResult(
            lam=1.0 if bounded else rho,
            t_star=1.0 / rho,
            residual=abs(spectral_radius(counts / rho) - 1.0),
            iterations=iterations,
            mode=UNIT,
            right_vector=right,
            left_vector=left,
            core_vertices=core.vertices,
            core_edges=len(core.edges),
            bounded=bounded,
        )
        log_event("growth", result.to_dict())
        return result

    witness = find_zero_weight_cycle(core)
    if witness is not None:
        raise ZeroWeightCycleError(
            "class pairs to zero with a directed cycle", [core.origin[i] for i in witness]  # type: ignore[misc]
        )

    def rho_at(t: float) -> float:
        return spectral_radius(transfer_matrix(core, t))

    iterations = 0
    top = rho_at(1.0)
    if top <= 1.0 + options.tol:
        t_star, residual, bounded = 1.0, abs(top - 1.0), True
    else:
        lo, hi = 0.5, 1.0
        while rho_at(lo) >= 1.0:
            hi = lo
            lo /= 2.0
            iterations += 1
            if iterations > options.bisection_cap:
                raise NonConvergenceError("could not bracket rho(A(t)) = 1")
        t_star = (lo + hi) / 2.0
        residual = abs(rho_at(t_star) - 1.0)
        while residual > options.tol and hi - lo > options.interval_width:
            iterations += 1
            if iterations > options.bisection_cap:
                raise NonConvergenceError(
                    f"bisection stopped after {options.bisection_cap} steps (residual {residual:.3e})"
                )
            value = rho_at(t_star)
            if value > 1.0:
                hi = t_star
            else:
                lo = t_star
            t_star = (lo + hi) / 2.0
            residual = abs(rho_at(t_star) - 1.0)
        bounded = False

    matrix = transfer_matrix(core, t_star)
    right, left, power_steps = _certificate(matrix, 1.0, options)
    result = GrowthResult(
        lam=1.0 / t_star,
        t_star=t_star,
        residual=residual,
        iterations=iterations + power_steps,
        mode=WEIGHTED,
        right_vector=right,
        left_vector=left,
        core_vertices=core.vertices,
        core_edges=len(core.edges),
        bounded=bounded,
    )
    log_event("growth", result.to_dict())
    return result


def characteristic_root(matrix: np.ndarray | Sequence[Sequence[int]]) -> float:
    """Largest real root of the characteristic polynomial (oracle for unit growth)."""
    coefficients = np.poly(np.asarray(matrix, dtype=float))
    roots = np.roots(coefficients)
    real = [r.real for r in roots if abs(r.imag) < 1e-9]
    return float(max(real)) if real else 0.0


# ---------------------------------------------------------------------------
# exact oracles


def _exact(matrix: Sequence[Sequence[int]] | np.ndarray) -> np.ndarray:
    rows = [[int(x) for x in row] for row in np.asarray(matrix, dtype=object).tolist()]
    return np.array(rows, dtype=object).reshape(len(rows), len(rows[0]) if rows else 0)


def exact_power(matrix: Sequence[Sequence[int]] | np.ndarray, n: int) -> np.ndarray:
    base = _exact(matrix)
    size = base.shape[0]
    result = np.array([[int(i == j) for j in range(size)] for i in range(size)], dtype=object).reshape(size, size)
    while n:
        if n & 1:
            result = result.dot(base)
        base = base.dot(base)
        n >>= 1
    return result


def _check_cap(n_max: int, cap: int) -> None:
    if n_max < 1:
        raise DomainError("n_max must be positive")
    if n_max > cap:
        raise DomainError(f"n_max {n_max} exceeds the configured cap {cap}")


def cycle_count_oracle(graph: WeightedDigraph, mode: str = UNIT, n_max: int = 20, *, cap: int = 400) -> list[int]:
    """c_n = number of rooted closed walks of length (unit) or total weight (weighted) n."""
    _check_cap(n_max, cap)
    if graph.is_empty:
        return [0] * n_max
    size = len(graph.vertices)

    if mode == UNIT:
        base = graph.count_matrix(exact=True)
        counts = []
        power = exact_power(base, 1)
        for _ in range(n_max):
            counts.append(int(np.trace(power)))
            power = power.dot(base)
        return counts

    if find_zero_weight_cycle(graph) is not None:
        raise ZeroWeightCycleError("weight-0 cycle makes weighted counts infinite")
    max_weight = max(w for _, _, w in graph.edges)
    layers = {w: graph.count_matrix(w, exact=True) for w in range(max_weight + 1)}
    # zero-weight edges are acyclic, so their Kleene star is a finite sum
    star = exact_power(layers[0], 0)
    term = star
    for _ in range(size):
        term = term.dot(layers[0])
        star = star + term
    walks = [star]
    counts = []
    for n in range(1, n_max + 1):
        total = np.zeros((size, size), dtype=object)
        total[:, :] = 0
        for k in range(1, min(n, max_weight) + 1):
            total = total + walks[n - k].dot(layers[k]).dot(star)
        walks.append(total)
        counts.append(int(np.trace(total)))
    return counts


def row_sum_growth(matrix: Sequence[Sequence[int]] | np.ndarray, n_max: int, *, cap: int = 400) -> float:
    """max_i (sum_j w^(n)_ij)^(1/n) with exact integer powers.

    By the norm inequality this never falls below the spectral radius; it converges to it
    from above as n grows.
    """
    _check_cap(n_max, cap)
    power = exact_power(matrix, n_max)
    best = max((sum(int(x) for x in row) for row in power.tolist()), default=0)
    if best <= 0:
        return 0.0
    return math.exp(math.log(best) / n_max)


def log_slope(values: Sequence[int], start: int, stop: int, *, cumulative: bool = False) -> float:
    """Least-squares slope of log c_n over n in [start, stop] (1-based), skipping zeros.

    With ``cumulative`` the fit uses S_n = c_1 + ... + c_n, which has the same growth rate
    but damps the oscillation of counts on nearly periodic graphs.
    """
    if cumulative:
        values = list(itertools.accumulate(values))
    points = [(n, math.log(values[n - 1])) for n in range(start, stop + 1) if values[n - 1] > 0]
    if len(points) < 2:
        return 0.0
    ns, logs = zip(*points)
    slope, _ = np.polyfit(np.array(ns, dtype=float), np.array(logs), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# stretch factor over cut components


@dataclass
class ComponentStretch:
    components: list[frozenset[int]]
    results: dict[int, Optional[GrowthResult]] = field(default_factory=dict)

    @property
    def best(self) -> Optional[tuple[int, GrowthResult]]:
        ranked = [(i, r) for i, r in self.results.items() if r is not None]
        if not ranked:
            return None
        return max(ranked, key=lambda item: item[1].lam)


def stretch_by_component(
    phi: FlowGraph,
    eta: FaceClass | Sequence[Any],
    xi: FaceClass | Sequence[int],
    options: Optional[SolverOptions] = None,
) -> ComponentStretch:
    """Weighted growth on each component's restricted core; empty cores map to None."""
    core = dynamical_core(cut(phi, eta))
    assert isinstance(core, FlowGraph)
    if core.dual_edges is None:
        # hand-built graph: one component; tet -1 marks an unknown owner
        components = [frozenset(e.tet for e in phi.edges if e.tet >= 0)]
    else:
        components = cut_components(phi, eta)
    summary = ComponentStretch(components)
    for index in range(len(components)):
        restricted = core if core.dual_edges is None else restrict_phi_N(core, components, index)
        weighted = from_flow_graph(restricted, xi)
        try:
            summary.results[index] = growth_rate(weighted, WEIGHTED, options)
        except EmptyCoreError:
            summary.results[index] = None
    return summary
