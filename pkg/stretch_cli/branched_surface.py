"""Dual graph, unstable branched surface sectors, the flow graph and branch equations.

The flow graph is built in dual position: every sector of the unstable branched
surface is dual to an edge ``e`` of the triangulation; its corners are the corners of
the edge link of ``e``. The bottom point is the tetrahedron below ``e``, the side points
are the first tetrahedra up either side, and every other corner of the sector receives a
flow graph edge from the bottom point. Translated to standard position this is one edge
per tetrahedron from its bottom edge and two from equatorial edges, all into its top edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping, Optional, Sequence

import networkx as nx
import numpy as np

from .errors import ConstructionError, DomainError, InputFormatError
from .triangulation import (
    EdgeCorner,
    EdgeLink,
    VeeringTriangulation,
    all_edge_links,
    edge_link,
    require_valid,
)
from .utils.debug import log_event

Number = int | Fraction


@dataclass(frozen=True)
class DualGraph:
    """Vertices are tetrahedra; face ``f`` is the directed edge ``edges[f] = (below, above)``."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.num_vertices))
        for face, (below, above) in enumerate(self.edges):
            graph.add_edge(below, above, key=face, face=face)
        return graph


def dual_graph(triangulation: VeeringTriangulation) -> DualGraph:
    require_valid(triangulation)
    edges = []
    for face in range(triangulation.num_faces):
        below, above = triangulation.face_sides(face)
        edges.append((below, above))
    return DualGraph(triangulation.num_tets, tuple(edges))  # type: ignore[arg-type]


@dataclass(frozen=True)
class Sector:
    edge: int
    bottom_point: int
    top_point: int
    side_points: tuple[int, int]
    boundary_a: tuple[int, ...]  # dual graph edges (faces) up side A
    boundary_b: tuple[int, ...]  # dual graph edges (faces) up side B
    top_corners: tuple[EdgeCorner, ...]


@dataclass(frozen=True)
class SectorComplex:
    sectors: tuple[Sector, ...]
    links: tuple[EdgeLink, ...]

    def __len__(self) -> int:
        return len(self.sectors)


def _check_side(gamma: DualGraph, tets: Sequence[int], faces: Sequence[int], edge: int) -> None:
    for lower, upper, face in zip(tets, tets[1:], faces):
        if gamma.edges[face] != (lower, upper):
            raise ConstructionError(
                f"sector of edge {edge}: face {face} is not oriented from tet {lower} to tet {upper}"
            )


def build_sectors(triangulation: VeeringTriangulation, gamma: Optional[DualGraph] = None) -> SectorComplex:
    gamma = gamma or dual_graph(triangulation)
    links = all_edge_links(triangulation)
    sectors = []
    for link in links:
        side_a, side_b = link.side_a, link.side_b
        if not side_a or not side_b:
            raise ConstructionError(f"sector of edge {link.edge} has an empty side")
        bottom = link.corners[0]
        top = link.corners[link.top_position]
        _check_side(
            gamma,
            [bottom.tet, *(c.tet for c in side_a), top.tet],
            link.side_a_faces,
            link.edge,
        )
        _check_side(
            gamma,
            [bottom.tet, *(c.tet for c in side_b), top.tet],
            link.side_b_faces,
            link.edge,
        )
        top_corners = (*side_a[1:], top, *reversed(side_b[1:]))
        sectors.append(
            Sector(
                edge=link.edge,
                bottom_point=bottom.tet,
                top_point=top.tet,
                side_points=(side_a[0].tet, side_b[0].tet),
                boundary_a=link.side_a_faces,
                boundary_b=link.side_b_faces,
                top_corners=top_corners,
            )
        )
    log_event("sectors", f"{len(sectors)} sectors traced")
    return SectorComplex(tuple(sectors), tuple(links))


# ---------------------------------------------------------------------------
# flow graph


@dataclass(frozen=True)
class FlowEdge:
    src: int
    dst: int
    tet: int
    kind: str  # "bottom" or "equatorial"
    crossings: tuple[tuple[int, int], ...]  # (face, coefficient); the builder only emits +1
    src_tet: Optional[int] = None
    slot: Optional[int] = None
    alt_crossings: Optional[tuple[tuple[int, int], ...]] = None

    def faces(self, *, opposite_side: bool = False) -> tuple[int, ...]:
        word = self.alt_crossings if opposite_side and self.alt_crossings is not None else self.crossings
        return tuple(face for face, _ in word)

    def pair(self, weights: Sequence[Number], *, opposite_side: bool = False) -> Number:
        word = self.alt_crossings if opposite_side and self.alt_crossings is not None else self.crossings
        return sum((coefficient * weights[face] for face, coefficient in word), 0)


@dataclass(frozen=True)
class FlowGraph:
    num_vertices: int
    edges: tuple[FlowEdge, ...]
    num_faces: int
    dual_edges: Optional[tuple[tuple[int, int], ...]] = None
    num_tets: Optional[int] = None
    name: str = ""

    @property
    def dual(self) -> Optional[DualGraph]:
        if self.dual_edges is None or self.num_tets is None:
            return None
        return DualGraph(self.num_tets, self.dual_edges)

    def with_edges(self, edges: Iterable[FlowEdge]) -> "FlowGraph":
        return FlowGraph(self.num_vertices, tuple(edges), self.num_faces, self.dual_edges, self.num_tets, self.name)


def _word(faces: Iterable[int]) -> tuple[tuple[int, int], ...]:
    return tuple((face, 1) for face in faces)


def _corner_word(link: EdgeLink, corner_index: int) -> tuple[int, ...]:
    """Faces crossed from the bottom point up the corner's own side."""
    if corner_index < link.top_position:
        return link.faces[:corner_index]
    return tuple(reversed(link.faces[corner_index:]))


def flow_graph(
    triangulation: VeeringTriangulation, sectors: Optional[SectorComplex] = None
) -> FlowGraph:
    sectors = sectors or build_sectors(triangulation)
    edges: list[FlowEdge] = []
    for sector, link in zip(sectors.sectors, sectors.links):
        positions = {corner: i for i, corner in enumerate(link.corners)}
        for corner in sector.top_corners:
            index = positions[corner]
            kind = "bottom" if corner.role == "bottom" else "equatorial"
            if kind == "bottom":
                crossings, alt = _word(link.side_a_faces), _word(link.side_b_faces)
            else:
                crossings, alt = _word(_corner_word(link, index)), None
            edges.append(
                FlowEdge(
                    src=sector.edge,
                    dst=triangulation.top_edge(corner.tet),
                    tet=corner.tet,
                    kind=kind,
                    crossings=crossings,
                    src_tet=sector.bottom_point,
                    slot=corner.edge,
                    alt_crossings=alt,
                )
            )

    edges.sort(key=lambda e: (e.tet, e.kind != "bottom", e.slot))
    _reconcile(triangulation, edges)
    gamma = dual_graph(triangulation)
    graph = FlowGraph(
        num_vertices=triangulation.num_edges,
        edges=tuple(edges),
        num_faces=triangulation.num_faces,
        dual_edges=gamma.edges,
        num_tets=triangulation.num_tets,
        name=triangulation.name,
    )
    log_event("flowgraph", f"{graph.num_vertices} vertices, {len(graph.edges)} edges")
    return graph


def _reconcile(triangulation: VeeringTriangulation, edges: Sequence[FlowEdge]) -> None:
    """Dual-position edges must match the standard-position count: 1 + 2 per tetrahedron."""
    for t in range(triangulation.num_tets):
        owned = [e for e in edges if e.tet == t]
        bottoms = [e for e in owned if e.kind == "bottom"]
        equatorial = [e for e in owned if e.kind == "equatorial"]
        tet = triangulation.tets[t]
        if len(bottoms) != 1 or len(equatorial) != 2:
            raise ConstructionError(
                f"tet {t}: {len(bottoms)} bottom and {len(equatorial)} equatorial flow edges (expected 1 and 2)"
            )
        if bottoms[0].src != triangulation.bottom_edge(t):
            raise ConstructionError(f"tet {t}: bottom flow edge does not leave the bottom edge")
        if any(e.slot not in tet.equatorial_edges for e in equatorial):
            raise ConstructionError(f"tet {t}: equatorial flow edge from a non-equatorial slot")
        if any(e.dst != triangulation.top_edge(t) for e in owned):
            raise ConstructionError(f"tet {t}: flow edge not aimed at the top edge")


def equatorial_sources(graph: FlowGraph, tet: int) -> tuple[int, ...]:
    """Local equatorial slots of ``tet`` that feed the flow graph, as derived from the sectors."""
    return tuple(sorted(e.slot for e in graph.edges if e.tet == tet and e.kind == "equatorial"))  # type: ignore[type-var]


def crossing_word(
    triangulation: VeeringTriangulation, edge: FlowEdge, *, opposite_side: bool = False
) -> list[int]:
    """Faces crossed by a flow edge, recomputed from the edge link of its source."""
    if edge.slot is None or triangulation.edge_of[edge.tet][edge.slot] != edge.src:
        raise DomainError(f"source edge {edge.src} is not incident to tet {edge.tet}")

    link = edge_link(triangulation, edge.src)
    for index, corner in enumerate(link.corners):
        if (corner.tet, corner.edge) != (edge.tet, edge.slot):
            continue
        if corner.role == "bottom":
            return list(link.side_b_faces if opposite_side else link.side_a_faces)
        if corner.role == "top":
            raise DomainError("the tetrahedron below a vertex carries no flow edge from it")
        return list(_corner_word(link, index))
    raise DomainError(f"slot {edge.slot} of tet {edge.tet} is not on the link of edge {edge.src}")


# ---------------------------------------------------------------------------
# branch equations and pairing


def branch_equations(triangulation: VeeringTriangulation) -> np.ndarray:
    """Row e is (faces up side A) minus (faces up side B) around edge e."""
    require_valid(triangulation)
    matrix = np.zeros((triangulation.num_edges, triangulation.num_faces), dtype=np.int64)
    for link in all_edge_links(triangulation):
        for face in link.side_a_faces:
            matrix[link.edge, face] += 1
        for face in link.side_b_faces:
            matrix[link.edge, face] -= 1
    return matrix


@dataclass(frozen=True)
class FaceClass:
    weights: tuple[Number, ...]

    @property
    def carried(self) -> bool:
        return all(w >= 0 for w in self.weights)

    def satisfies(self, matrix: Optional[np.ndarray]) -> bool:
        if matrix is None:
            return True
        return all(
            sum((int(c) * w for c, w in zip(row, self.weights)), 0) == 0 for row in matrix
        )

    def to_dict(self) -> dict[str, Any]:
        return {"weights": [str(w) if isinstance(w, Fraction) and w.denominator != 1 else int(w) for w in self.weights]}


def face_class(
    weights: Sequence[Number],
    *,
    num_faces: Optional[int] = None,
    matrix: Optional[np.ndarray] = None,
    require_carried: bool = False,
) -> FaceClass:
    """Build a FaceClass, checking length, branch equations and (optionally) carriedness."""
    values = tuple(Fraction(w) if not isinstance(w, int) else w for w in weights)
    expected = num_faces if num_faces is not None else (matrix.shape[1] if matrix is not None else None)
    if expected is not None and len(values) != expected:
        raise DomainError(f"class has {len(values)} weights, expected {expected}")
    result = FaceClass(values)
    if not result.satisfies(matrix):
        raise DomainError("class violates the branch equations")
    if require_carried and not result.carried:
        raise DomainError("class is not carried (negative face weight)")
    return result


def tet_coboundary(triangulation: VeeringTriangulation, tet: int) -> FaceClass:
    """Top faces minus bottom faces of one tetrahedron."""
    weights = [0] * triangulation.num_faces
    t = triangulation.tets[tet]
    for f in range(4):
        weights[triangulation.face_of[tet][f]] += 1 if t.is_top_face(f) else -1
    return FaceClass(tuple(weights))


def is_closed_walk(graph: FlowGraph, cycle: Sequence[int]) -> bool:
    if not cycle:
        return False
    for here, there in zip(cycle, [*cycle[1:], cycle[0]]):
        if graph.edges[here].dst != graph.edges[there].src:
            return False
    return True


def pairing(
    graph: FlowGraph,
    cycle: Sequence[int],
    weights: FaceClass | Sequence[Number],
    *,
    matrix: Optional[np.ndarray] = None,
    opposite_side: bool = False,
) -> Number:
    """Sum of class weights over the crossing words of a closed walk of flow edges."""
    if not is_closed_walk(graph, cycle):
        raise DomainError("edge sequence is not a closed directed walk")
    cls = weights if isinstance(weights, FaceClass) else FaceClass(tuple(weights))
    if not cls.satisfies(matrix):
        raise DomainError("class violates the branch equations")
    return sum((graph.edges[i].pair(cls.weights, opposite_side=opposite_side) for i in cycle), 0)


def enumerate_cycles(graph: FlowGraph, max_length: int) -> Iterator[tuple[int, ...]]:
    """Closed walks up to ``max_length`` edges whose first edge has the smallest index."""
    outgoing: dict[int, list[int]] = {}
    for index, edge in enumerate(graph.edges):
        outgoing.setdefault(edge.src, []).append(index)

    for start, first in enumerate(graph.edges):
        stack: list[tuple[int, ...]] = [(start,)]
        while stack:
            walk = stack.pop()
            last = graph.edges[walk[-1]]
            if last.dst == first.src:
                yield walk
            if len(walk) == max_length:
                continue
            for nxt in outgoing.get(last.dst, []):
                if nxt >= start:
                    stack.append((*walk, nxt))


# ---------------------------------------------------------------------------
# JSON interchange


def flow_graph_to_dict(graph: FlowGraph) -> dict[str, Any]:
    document: dict[str, Any] = {
        "vertices": list(range(graph.num_vertices)),
        "num_faces": graph.num_faces,
        "edges": [],
    }
    if graph.name:
        document["name"] = graph.name
    if graph.dual_edges is not None:
        document["num_tets"] = graph.num_tets
        document["dual_edges"] = [list(pair) for pair in graph.dual_edges]
    for edge in graph.edges:
        entry: dict[str, Any] = {
            "src": edge.src,
            "dst": edge.dst,
            "tet": edge.tet,
            "kind": edge.kind,
            "crossings": [face for face, _ in edge.crossings],
        }
        if edge.src_tet is not None:
            entry["src_tet"] = edge.src_tet
        if edge.slot is not None:
            entry["slot"] = edge.slot
        if edge.alt_crossings is not None:
            entry["alt_crossings"] = [face for face, _ in edge.alt_crossings]
        document["edges"].append(entry)
    return document


def flow_graph_from_dict(document: Mapping[str, Any]) -> FlowGraph:
    try:
        vertices = document["vertices"]
        raw_edges = document["edges"]
    except (KeyError, TypeError) as exc:
        raise InputFormatError("flow graph needs 'vertices' and 'edges'") from exc
    num_vertices = vertices if isinstance(vertices, int) else len(vertices)
    edges = []
    max_face = -1
    for i, raw in enumerate(raw_edges):
        try:
            src, dst = int(raw["src"]), int(raw["dst"])
            crossings = [int(f) for f in raw.get("crossings", [])]
            alt = raw.get("alt_crossings")
        except (KeyError, TypeError, ValueError) as exc:
            raise InputFormatError(f"flow edge {i} is malformed") from exc
        if not (0 <= src < num_vertices and 0 <= dst < num_vertices):
            raise InputFormatError(f"flow edge {i} references a missing vertex")
        if any(f < 0 for f in crossings):
            raise InputFormatError(f"flow edge {i} crosses a negative face id")
        max_face = max([max_face, *crossings, *(alt or [])])
        edges.append(
            FlowEdge(
                src=src,
                dst=dst,
                tet=int(raw.get("tet", -1)),
                kind=str(raw.get("kind", "equatorial")),
                crossings=_word(crossings),
                src_tet=raw.get("src_tet"),
                slot=raw.get("slot"),
                alt_crossings=_word(alt) if alt is not None else None,
            )
        )
    dual = document.get("dual_edges")
    num_faces = int(document.get("num_faces", max_face + 1))
    if num_faces <= max_face:
        raise InputFormatError("'num_faces' is smaller than a crossed face id")
    return FlowGraph(
        num_vertices=num_vertices,
        edges=tuple(edges),
        num_faces=num_faces,
        dual_edges=tuple((int(b), int(a)) for b, a in dual) if dual is not None else None,
        num_tets=int(document["num_tets"]) if dual is not None and "num_tets" in document else None,
        name=str(document.get("name", "")),
    )
