"""Exact rational polyhedral cones and the entropy function on carried classes.

Cones are stored in both descriptions: generating rays plus a lineality basis, and
inequalities ``a . x >= 0`` plus equalities ``a . x = 0``. Conversion between the two is
the incremental double description method with the combinatorial adjacency test, run in
exact ``Fraction`` arithmetic. Rays and covectors are normalized to primitive integer
vectors and sorted, so equal cones print identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Optional, Sequence

from .branched_surface import FaceClass, FlowGraph, branch_equations
from .dynamics import (
    WEIGHTED,
    SolverOptions,
    WeightedDigraph,
    cut,
    cut_components,
    dynamical_core,
    growth_rate,
    restrict_phi_N,
)
from .errors import DomainError, EmptyCoreError, InputFormatError, ZeroWeightCycleError
from .triangulation import VeeringTriangulation
from .utils.debug import log_event

Vector = tuple[Fraction, ...]
Rational = int | Fraction

INTERIOR = "interior"
BOUNDARY = "boundary"
OUTSIDE = "outside"

DEFAULT_DIMENSION_CAP = 20


def _dot(a: Sequence[Rational], b: Sequence[Rational]) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def _vec(values: Iterable[Rational]) -> Vector:
    return tuple(Fraction(v) for v in values)


def primitive(vector: Sequence[Rational]) -> Vector:
    """Scale to the primitive integer vector on the same ray (zero stays zero)."""
    values = _vec(vector)
    denominators = [v.denominator for v in values]
    scale = math.lcm(*denominators) if denominators else 1
    integers = [int(v * scale) for v in values]
    divisor = math.gcd(*integers) if integers else 0
    if divisor == 0:
        return values
    return tuple(Fraction(x // divisor) for x in integers)


def _is_zero(vector: Sequence[Rational]) -> bool:
    return all(v == 0 for v in vector)


def rank(vectors: Sequence[Sequence[Rational]]) -> int:
    """Exact rank by Gaussian elimination over the rationals."""
    rows = [list(_vec(v)) for v in vectors if not _is_zero(v)]
    if not rows:
        return 0
    width = len(rows[0])
    result = 0
    for column in range(width):
        pivot = next((i for i in range(result, len(rows)) if rows[i][column] != 0), None)
        if pivot is None:
            continue
        rows[result], rows[pivot] = rows[pivot], rows[result]
        for i in range(len(rows)):
            if i != result and rows[i][column] != 0:
                factor = rows[i][column] / rows[result][column]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[result])]
        result += 1
    return result


def _canonical(vectors: Iterable[Sequence[Rational]]) -> tuple[Vector, ...]:
    unique = {primitive(v) for v in vectors if not _is_zero(v)}
    return tuple(sorted(unique))


def _reduce_lineality(basis: Sequence[Vector]) -> tuple[Vector, ...]:
    """Row-reduced basis of a subspace so equal subspaces get equal bases."""
    rows = [list(v) for v in basis if not _is_zero(v)]
    if not rows:
        return ()
    width = len(rows[0])
    lead = 0
    for column in range(width):
        pivot = next((i for i in range(lead, len(rows)) if rows[i][column] != 0), None)
        if pivot is None:
            continue
        rows[lead], rows[pivot] = rows[pivot], rows[lead]
        head = rows[lead][column]
        rows[lead] = [x / head for x in rows[lead]]
        for i in range(len(rows)):
            if i != lead and rows[i][column] != 0:
                factor = rows[i][column]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[lead])]
        lead += 1
    return tuple(primitive(r) for r in rows[:lead])


# ---------------------------------------------------------------------------
# double description


def _extreme_rays(
    dim: int,
    inequalities: Sequence[Vector],
    equalities: Sequence[Vector] = (),
    *,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
    """H -> V: extreme rays and a lineality basis of {a.x >= 0, e.x = 0}."""
    if dim > cap:
        raise DomainError(f"cone dimension {dim} exceeds the configured cap {cap}")
    lineality: list[Vector] = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    rays: list[Vector] = []
    processed: list[Vector] = []

    constraints = [(e, True) for e in equalities] + [(a, False) for a in inequalities]
    for normal, is_equality in constraints:
        if len(normal) != dim:
            raise DomainError(f"constraint has length {len(normal)}, expected {dim}")
        index = next((i for i, l in enumerate(lineality) if _dot(normal, l) != 0), None)
        if index is not None:
            # cut the lineality space by one dimension
            hit = lineality.pop(index)
            height = _dot(normal, hit)
            if height < 0:
                hit, height = tuple(-x for x in hit), -height
            lineality = [tuple(x - (_dot(normal, l) / height) * y for x, y in zip(l, hit)) for l in lineality]
            rays = [tuple(x - (_dot(normal, r) / height) * y for x, y in zip(r, hit)) for r in rays]
            if not is_equality:
                rays.append(hit)
            rays = list(_canonical(rays))
            processed.append(normal)
            continue

        values = [_dot(normal, r) for r in rays]
        positive = [r for r, v in zip(rays, values) if v > 0]
        negative = [r for r, v in zip(rays, values) if v < 0]
        zero = [r for r, v in zip(rays, values) if v == 0]
        tight = {r: frozenset(i for i, a in enumerate(processed) if _dot(a, r) == 0) for r in rays}

        created = []
        for p in positive:
            for n in negative:
                common = tight[p] & tight[n]
                if any(common <= tight[r] for r in rays if r is not p and r is not n):
                    continue
                vp, vn = _dot(normal, p), _dot(normal, n)
                created.append(tuple(vp * y - vn * x for x, y in zip(p, n)))
        rays = (zero if is_equality else positive + zero) + created
        rays = list(_canonical(rays))
        processed.append(normal)
        log_event("dd", f"constraint {len(processed)}: {len(rays)} rays")

    return _canonical(rays), _reduce_lineality(lineality)


@dataclass(frozen=True)
class RationalCone:
    dim: int
    rays: tuple[Vector, ...]
    ineqs: tuple[Vector, ...]
    lineality: tuple[Vector, ...] = ()
    equalities: tuple[Vector, ...] = ()
    metadata: Mapping[str, Any] = field(default_factory=dict, compare=False)

    @property
    def pointed(self) -> bool:
        return not self.lineality

    @property
    def trivial(self) -> bool:
        return not self.rays and not self.lineality

    @property
    def dimension(self) -> int:
        return rank([*self.rays, *self.lineality])

    @property
    def full_dimensional(self) -> bool:
        return self.dimension == self.dim

    @property
    def implicit_equalities(self) -> tuple[Vector, ...]:
        generators = [*self.rays, *self.lineality]
        return tuple(a for a in self.ineqs if all(_dot(a, g) == 0 for g in generators))

    def flags(self) -> dict[str, bool]:
        return {"pointed": self.pointed, "full_dimensional": self.full_dimensional, "trivial": self.trivial}


def cone_from_inequalities(
    dim: int,
    ineqs: Sequence[Sequence[Rational]],
    equalities: Sequence[Sequence[Rational]] = (),
    *,
    cap: int = DEFAULT_DIMENSION_CAP,
    metadata: Optional[Mapping[str, Any]] = None,
) -> RationalCone:
    a = _canonical(ineqs)
    e = _reduce_lineality([_vec(x) for x in equalities])
    rays, lineality = _extreme_rays(dim, a, e, cap=cap)
    return RationalCone(dim, rays, a, lineality, e, dict(metadata or {}))


def cone_from_rays(
    dim: int,
    rays: Sequence[Sequence[Rational]],
    lineality: Sequence[Sequence[Rational]] = (),
    *,
    cap: int = DEFAULT_DIMENSION_CAP,
    metadata: Optional[Mapping[str, Any]] = None,
) -> RationalCone:
    """V -> H through the dual cone, then back to a minimal generating set."""
    if any(len(r) != dim for r in (*rays, *lineality)):
        raise DomainError(f"generators must have length {dim}")
    facets, implicit = _extreme_rays(dim, _canonical(rays), [_vec(l) for l in lineality], cap=cap)
    minimal, span = _extreme_rays(dim, facets, implicit, cap=cap)
    return RationalCone(dim, minimal, facets, span, implicit, dict(metadata or {}))


def membership(cone: RationalCone, x: Sequence[Rational]) -> str:
    if len(x) != cone.dim:
        raise DomainError(f"point has length {len(x)}, expected {cone.dim}")
    if any(_dot(e, x) != 0 for e in cone.equalities):
        return OUTSIDE
    if any(_dot(a, x) < 0 for a in cone.ineqs):
        return OUTSIDE
    implicit = set(cone.implicit_equalities)
    if any(_dot(a, x) != 0 for a in implicit):
        return OUTSIDE
    if all(_dot(a, x) > 0 for a in cone.ineqs if a not in implicit):
        return INTERIOR
    return BOUNDARY


def contains_cone(outer: RationalCone, inner: RationalCone) -> bool:
    if outer.dim != inner.dim:
        return False
    return all(membership(outer, r) != OUTSIDE for r in inner.rays) and all(
        membership(outer, l) != OUTSIDE and membership(outer, tuple(-x for x in l)) != OUTSIDE
        for l in inner.lineality
    )


def same_cone(first: RationalCone, second: RationalCone) -> bool:
    return contains_cone(first, second) and contains_cone(second, first)


@dataclass
class DoubleDescriptionReport:
    ok: bool
    problems: list[str] = field(default_factory=list)


def verify_double_description(cone: RationalCone, *, cap: int = DEFAULT_DIMENSION_CAP) -> DoubleDescriptionReport:
    """Generators satisfy every constraint, and both descriptions recompute to one cone."""
    problems = []
    for r in cone.rays:
        if any(_dot(a, r) < 0 for a in cone.ineqs) or any(_dot(e, r) != 0 for e in cone.equalities):
            problems.append(f"ray {format_rational_vector(r)} violates a constraint")
    for l in cone.lineality:
        if any(_dot(a, l) != 0 for a in (*cone.ineqs, *cone.equalities)):
            problems.append(f"lineality vector {format_rational_vector(l)} is not orthogonal to the constraints")
    from_h = cone_from_inequalities(cone.dim, cone.ineqs, cone.equalities, cap=cap)
    from_v = cone_from_rays(cone.dim, cone.rays, cone.lineality, cap=cap)
    if not contains_cone(from_v, from_h):
        problems.append("cone of the inequalities is not inside the cone of the rays")
    if not contains_cone(from_h, from_v):
        problems.append("cone of the rays is not inside the cone of the inequalities")
    return DoubleDescriptionReport(not problems, problems)


def carried_cone(triangulation: VeeringTriangulation, *, cap: int = DEFAULT_DIMENSION_CAP) -> RationalCone:
    """Nonnegative face weights satisfying the branch equations."""
    dim = triangulation.num_faces
    if dim > cap:
        raise DomainError(f"{dim} faces exceed the cone dimension cap {cap}")
    matrix = branch_equations(triangulation)
    positivity = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    cone = cone_from_inequalities(dim, positivity, matrix.tolist(), cap=cap, metadata={"name": triangulation.name})
    log_event("carried_cone", f"{len(cone.rays)} rays in dimension {dim}")
    return cone


# ---------------------------------------------------------------------------
# restriction maps


@dataclass(frozen=True)
class RestrictionMap:
    matrix: tuple[Vector, ...]  # target_dim rows, source_dim columns
    kernel_dimension: Optional[int] = None

    def __post_init__(self) -> None:
        widths = {len(row) for row in self.matrix}
        if len(widths) > 1:
            raise DomainError("restriction map rows have different lengths")
        if self.kernel_dimension is not None:
            computed = self.source_dim - rank(self.matrix)
            if computed != self.kernel_dimension:
                raise DomainError(f"declared kernel dimension {self.kernel_dimension} but rank gives {computed}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Rational]], kernel_dimension: Optional[int] = None) -> "RestrictionMap":
        return cls(tuple(_vec(r) for r in rows), kernel_dimension)

    @property
    def source_dim(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    @property
    def target_dim(self) -> int:
        return len(self.matrix)

    def apply(self, vector: Sequence[Rational]) -> Vector:
        return tuple(_dot(row, vector) for row in self.matrix)


def compose_maps(first: RestrictionMap, second: RestrictionMap) -> RestrictionMap:
    """second . first"""
    if second.source_dim != first.target_dim:
        raise DomainError("restriction maps do not compose")
    columns = list(zip(*first.matrix)) if first.matrix else []
    return RestrictionMap(tuple(tuple(_dot(row, col) for col in columns) for row in second.matrix))


def image_cone(cone: RationalCone, restriction: RestrictionMap, *, cap: int = DEFAULT_DIMENSION_CAP) -> RationalCone:
    if restriction.source_dim != cone.dim:
        raise DomainError(f"map expects dimension {restriction.source_dim}, cone has {cone.dim}")
    rays = [restriction.apply(r) for r in cone.rays]
    lineality = [restriction.apply(l) for l in cone.lineality]
    return cone_from_rays(
        restriction.target_dim,
        [r for r in rays if not _is_zero(r)],
        [l for l in lineality if not _is_zero(l)],
        cap=cap,
        metadata=dict(cone.metadata),
    )


# ---------------------------------------------------------------------------
# entropy function

INTERIOR_OK = "interior-ok"
ZERO_WEIGHT_CYCLE = "zero-weight-cycle"
EMPTY_CORE = "empty-core"


@dataclass(frozen=True)
class EntropySample:
    xi: Vector
    lam: Optional[float]
    ent: Optional[float]
    status: str
    t: Optional[Fraction] = None

    @property
    def ok(self) -> bool:
        return self.status == INTERIOR_OK

    def to_dict(self) -> dict[str, Any]:
        return {
            "t": None if self.t is None else float(self.t),
            "xi": [format_rational(x) for x in self.xi],
            "lambda": self.lam,
            "ent": self.ent,
            "status": self.status,
        }


@dataclass(frozen=True)
class EntropyField:
    """xi -> ent(xi) on a fixed graph whose edge weights depend linearly on xi.

    ``pairing[e][f]`` counts how often edge ``e`` meets coordinate ``f``.
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    pairing: tuple[tuple[int, ...], ...]
    dim: int
    options: SolverOptions = field(default_factory=SolverOptions)

    @classmethod
    def from_digraph(cls, graph: WeightedDigraph, options: Optional[SolverOptions] = None) -> "EntropyField":
        """Each edge carries its own coordinate: xi is the edge-weight vector."""
        size = len(graph.edges)
        return cls(
            graph.vertices,
            tuple((u, v) for u, v, _ in graph.edges),
            tuple(tuple(int(i == j) for j in range(size)) for i in range(size)),
            size,
            options or SolverOptions(),
        )

    @classmethod
    def from_flow_graph(cls, graph: FlowGraph, options: Optional[SolverOptions] = None) -> "EntropyField":
        rows = []
        for edge in graph.edges:
            row = [0] * graph.num_faces
            for face in edge.faces():
                row[face] += 1
            rows.append(tuple(row))
        return cls(
            tuple(range(graph.num_vertices)),
            tuple((e.src, e.dst) for e in graph.edges),
            tuple(rows),
            graph.num_faces,
            options or SolverOptions(),
        )

    @property
    def empty(self) -> bool:
        return not self.edges

    def sample(self, xi: Sequence[Rational], t: Optional[Fraction] = None) -> EntropySample:
        values = _vec(xi)
        if len(values) != self.dim:
            raise DomainError(f"class has {len(values)} coordinates, expected {self.dim}")
        if any(v < 0 for v in values):
            raise DomainError("class is not carried (negative weight)")
        if self.empty:
            return EntropySample(values, 1.0, 0.0, EMPTY_CORE, t)
        scale = math.lcm(*(v.denominator for v in values))
        integral = [int(v * scale) for v in values]
        weights = [sum(c * x for c, x in zip(row, integral)) for row in self.pairing]
        graph = WeightedDigraph(self.vertices, tuple((u, v, w) for (u, v), w in zip(self.edges, weights)))
        try:
            result = growth_rate(graph, WEIGHTED, self.options)
        except ZeroWeightCycleError:
            return EntropySample(values, None, None, ZERO_WEIGHT_CYCLE, t)
        except EmptyCoreError:
            return EntropySample(values, 1.0, 0.0, EMPTY_CORE, t)
        ent = scale * math.log(result.lam)
        return EntropySample(values, math.exp(ent), ent, INTERIOR_OK, t)

    def samples(self, points: Iterable[Sequence[Rational]]) -> list[EntropySample]:
        return [self.sample(p) for p in points]


def entropy_field(
    phi: FlowGraph,
    eta: FaceClass | Sequence[Rational],
    component: int,
    *,
    triangulation: Optional[VeeringTriangulation] = None,
    options: Optional[SolverOptions] = None,
) -> EntropyField:
    """Entropy on Phi_N: the component's part of the dynamical core of Phi cut along eta."""
    matrix = branch_equations(triangulation) if triangulation is not None else None
    core = dynamical_core(cut(phi, eta, matrix=matrix))
    assert isinstance(core, FlowGraph)
    components = cut_components(phi, eta)
    restricted = restrict_phi_N(core, components, component)
    restricted = dynamical_core(restricted)
    assert isinstance(restricted, FlowGraph)
    return EntropyField.from_flow_graph(restricted, options)


def entropy_sample(
    phi: FlowGraph,
    eta: FaceClass | Sequence[Rational],
    component: int,
    points: Iterable[Sequence[Rational]],
    *,
    triangulation: Optional[VeeringTriangulation] = None,
    options: Optional[SolverOptions] = None,
) -> list[EntropySample]:
    points = [_vec(p) for p in points]
    if triangulation is not None:
        matrix = branch_equations(triangulation)
        for p in points:
            if not FaceClass(p).satisfies(matrix):
                raise DomainError(f"class {format_rational_vector(p)} violates the branch equations")
    field_ = entropy_field(phi, eta, component, triangulation=triangulation, options=options)
    return field_.samples(points)


@dataclass
class ProbeReport:
    name: str
    passed: bool
    max_violation: float
    tolerance: float
    samples: list[EntropySample] = field(default_factory=list)
    details: list[tuple[Any, float]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "probe": self.name,
            "passed": self.passed,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "details": [[str(k), v] for k, v in self.details],
        }


def segment_points(start: Sequence[Rational], end: Sequence[Rational], k: int) -> list[tuple[Fraction, Vector]]:
    """k points t = 0..1 along t*start + (1-t)*end."""
    if k < 2:
        raise DomainError("a segment needs at least two sample points")
    a, b = _vec(start), _vec(end)
    out = []
    for i in range(k):
        t = Fraction(i, k - 1)
        out.append((t, tuple(t * x + (1 - t) * y for x, y in zip(a, b))))
    return out


def convexity_probe(
    entropy: EntropyField,
    start: Sequence[Rational],
    end: Sequence[Rational],
    k: int = 9,
    *,
    tol: float = 1e-6,
) -> ProbeReport:
    samples = [entropy.sample(x, t) for t, x in segment_points(start, end, k)]
    bad = [s for s in samples if not s.ok]
    if bad:
        raise DomainError(f"segment sample {format_rational_vector(bad[0].xi)} is {bad[0].status}")
    at_start, at_end = samples[-1].ent, samples[0].ent  # t = 1 is start, t = 0 is end
    details = []
    for sample in samples:
        t = float(sample.t)  # type: ignore[arg-type]
        chord = t * at_start + (1 - t) * at_end  # type: ignore[operator]
        details.append((sample.t, sample.ent - chord))  # type: ignore[operator]
    worst = max(0.0, max(v for _, v in details))
    log_event("convexity", f"max violation {worst:.3e} over {k} points")
    return ProbeReport("convexity", worst <= tol, worst, tol, samples, details)


def homogeneity_probe(
    entropy: EntropyField,
    xi: Sequence[Rational],
    scales: Sequence[int] = (1, 2, 3, 4, 5),
    *,
    tol: float = 1e-9,
) -> ProbeReport:
    """k * ent(k xi) - ent(xi) for each integer scale k."""
    base = entropy.sample(xi)
    if not base.ok:
        raise DomainError(f"class {format_rational_vector(base.xi)} is {base.status}")
    samples, details = [base], []
    for k in scales:
        if k < 1:
            raise DomainError("scales must be positive integers")
        scaled = entropy.sample([k * Fraction(x) for x in xi])
        samples.append(scaled)
        details.append((k, k * scaled.ent - base.ent))  # type: ignore[operator]
    worst = max((abs(v) for _, v in details), default=0.0)
    return ProbeReport("homogeneity", worst <= tol, worst, tol, samples, details)


def continuity_probe(
    entropy: EntropyField,
    xi: Sequence[Rational],
    delta: Fraction = Fraction(1, 1000),
    directions: Optional[Sequence[Sequence[Rational]]] = None,
    *,
    tol: float = 1e-2,
) -> ProbeReport:
    """|ent(xi + d) - ent(xi)| for perturbations d of relative size delta along each direction.

    Directions must keep the class inside the solution space (for flow graphs pass cone rays).
    """
    base_vec = _vec(xi)
    base = entropy.sample(base_vec)
    if not base.ok:
        raise DomainError(f"class {format_rational_vector(base_vec)} is {base.status}")
    if directions is None:
        directions = [tuple(int(i == j) for j in range(entropy.dim)) for i in range(entropy.dim)]
    size = max(abs(x) for x in base_vec)
    samples, details = [base], []
    for direction in directions:
        d = _vec(direction)
        length = max(abs(x) for x in d)
        if length == 0:
            continue
        moved = tuple(x + delta * size / length * y for x, y in zip(base_vec, d))
        sample = entropy.sample(moved)
        samples.append(sample)
        change = float("inf") if sample.ent is None else abs(sample.ent - base.ent)  # type: ignore[operator]
        details.append((format_rational_vector(d), change))
    worst = max((v for _, v in details), default=0.0)
    return ProbeReport("continuity", worst <= tol, worst, tol, samples, details)


# ---------------------------------------------------------------------------
# JSON interchange and text helpers


def format_rational(value: Rational) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def format_rational_vector(vector: Sequence[Rational]) -> str:
    return "(" + ", ".join(format_rational(v) for v in vector) + ")"


def parse_rational(raw: Any) -> Fraction:
    """Accepts ints, "p/q" strings and [num, den] pairs."""
    try:
        if isinstance(raw, (list, tuple)):
            num, den = raw
            return Fraction(int(num), int(den))
        if isinstance(raw, float):
            raise TypeError("floats are not exact")
        return Fraction(raw)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputFormatError(f"not a rational number: {raw!r}") from exc


def _pairs(vectors: Iterable[Vector]) -> list[list[list[int]]]:
    return [[[v.numerator, v.denominator] for v in vec] for vec in vectors]


def cone_to_dict(cone: RationalCone) -> dict[str, Any]:
    document: dict[str, Any] = {
        "dim": cone.dim,
        "rays": _pairs(cone.rays),
        "ineqs": _pairs(cone.ineqs),
        "flags": cone.flags(),
    }
    if cone.lineality:
        document["lineality"] = _pairs(cone.lineality)
    if cone.equalities:
        document["equalities"] = _pairs(cone.equalities)
    if cone.metadata:
        document["metadata"] = dict(cone.metadata)
    return document


def cone_from_dict(document: Mapping[str, Any], *, cap: int = DEFAULT_DIMENSION_CAP) -> RationalCone:
    """Rebuild a cone; whichever description is present is completed by double description."""
    try:
        dim = int(document["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError("cone needs an integer 'dim'") from exc

    def vectors(key: str) -> list[Vector]:
        return [tuple(parse_rational(x) for x in vec) for vec in document.get(key, [])]

    metadata = dict(document.get("metadata", {}))
    if "adjacent_to_boundary" in document:
        metadata["adjacent_to_boundary"] = document["adjacent_to_boundary"]
    if document.get("rays") or document.get("lineality") or "ineqs" not in document:
        return cone_from_rays(dim, vectors("rays"), vectors("lineality"), cap=cap, metadata=metadata)
    return cone_from_inequalities(dim, vectors("ineqs"), vectors("equalities"), cap=cap, metadata=metadata)


def restriction_map_from_dict(document: Mapping[str, Any] | Sequence[Sequence[Any]]) -> RestrictionMap:
    rows = document.get("matrix") if isinstance(document, Mapping) else document
    if rows is None:
        raise InputFormatError("restriction map needs a 'matrix'")
    kernel = document.get("kernel_dimension") if isinstance(document, Mapping) else None
    return RestrictionMap.from_rows([[parse_rational(x) for x in row] for row in rows], kernel)

