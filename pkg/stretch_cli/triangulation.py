"""Taut/veering triangulation data model, JSON codec, validation and edge links.

Conventions (see docs/CONVENTIONS.md):

* face ``i`` of a tetrahedron is opposite vertex ``i``; local edges 0..5 are the vertex
  pairs 01, 02, 03, 12, 13, 23;
* ``pi_pair`` p puts angle pi on the pair {01,23}, {02,13} or {03,12}; the top edge is the
  pi-edge through vertex 0, i.e. ``{0, p+1}``;
* vertex order is positively oriented, so every gluing permutation must be odd;
* seen from above the square reads ``0, a, k, b`` counterclockwise, with ``k = p+1`` and
  ``(0, k, a, b)`` an even permutation.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Optional, Sequence

from .errors import DomainError, InputFormatError
from .utils.debug import log_event

LOCAL_EDGES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PI_PAIRS: tuple[tuple[int, int], ...] = ((0, 5), (1, 4), (2, 3))
COLORS = ("red", "blue")


def local_edge(u: int, v: int) -> int:
    """Index of the local edge joining vertices ``u`` and ``v``."""
    if u == v:
        raise ValueError("an edge needs two distinct vertices")
    return LOCAL_EDGES.index((min(u, v), max(u, v)))


def permutation_sign(perm: Sequence[int]) -> int:
    """+1 for even permutations, -1 for odd ones."""
    sign = 1
    for i, j in itertools.combinations(range(len(perm)), 2):
        if perm[i] > perm[j]:
            sign = -sign
    return sign


def inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    inverse = [0] * len(perm)
    for source, target in enumerate(perm):
        inverse[target] = source
    return tuple(inverse)


def other_color(color: str) -> str:
    return "blue" if color == "red" else "red"


@dataclass(frozen=True)
class Gluing:
    tet: int
    face: int
    perm: tuple[int, int, int, int]


@dataclass(frozen=True)
class Tetrahedron:
    """One taut tetrahedron: four face gluings plus the pi-pair designation."""

    glue: tuple[Gluing, Gluing, Gluing, Gluing]
    pi_pair: int

    @property
    def top_vertices(self) -> tuple[int, int]:
        return (0, self.pi_pair + 1)

    @property
    def square(self) -> tuple[int, int, int, int]:
        """Counterclockwise vertex order of the flattened square seen from above."""
        k = self.pi_pair + 1
        a, b = [v for v in range(1, 4) if v != k]
        if permutation_sign((0, k, a, b)) < 0:
            a, b = b, a
        return (0, a, k, b)

    @property
    def bottom_vertices(self) -> tuple[int, int]:
        _, a, _, b = self.square
        return (a, b)

    @property
    def top_edge(self) -> int:
        return local_edge(*self.top_vertices)

    @property
    def bottom_edge(self) -> int:
        return local_edge(*self.bottom_vertices)

    @property
    def pi_edges(self) -> tuple[int, int]:
        return PI_PAIRS[self.pi_pair]

    @property
    def equatorial_edges(self) -> tuple[int, int, int, int]:
        """Equatorial local edges in square order: 0a, ak, kb, b0."""
        v = self.square
        return tuple(local_edge(v[i], v[(i + 1) % 4]) for i in range(4))  # type: ignore[return-value]

    @property
    def top_faces(self) -> tuple[int, int]:
        """Top faces, the side-A face (opposite ``a``) first."""
        return self.bottom_vertices

    @property
    def bottom_faces(self) -> tuple[int, int]:
        return self.top_vertices

    def is_top_face(self, face: int) -> bool:
        return face in self.top_faces


@dataclass(frozen=True)
class EdgeCorner:
    """One (tetrahedron, local edge) slot met while walking around an edge."""

    tet: int
    edge: int
    enter_face: int
    leave_face: int
    role: str  # "top" (edge is the tet's top edge), "bottom" or "equatorial"


@dataclass(frozen=True)
class EdgeLink:
    """Closed cycle of corners around an edge class.

    ``corners[0]`` is the corner in the tetrahedron below the edge (role "top") and
    ``corners[top_position]`` the corner in the tetrahedron above it. The face between
    ``corners[i]`` and ``corners[i+1]`` is ``faces[i]``.
    """

    edge: int
    corners: tuple[EdgeCorner, ...]
    faces: tuple[int, ...]
    top_position: int

    def __len__(self) -> int:
        return len(self.corners)

    @property
    def side_a(self) -> tuple[EdgeCorner, ...]:
        return self.corners[1 : self.top_position]

    @property
    def side_b(self) -> tuple[EdgeCorner, ...]:
        """Side B corners listed upward, from the bottom corner to the top corner."""
        return tuple(reversed(self.corners[self.top_position + 1 :]))

    @property
    def side_a_faces(self) -> tuple[int, ...]:
        return self.faces[: self.top_position]

    @property
    def side_b_faces(self) -> tuple[int, ...]:
        return tuple(reversed(self.faces[self.top_position :]))


@dataclass(frozen=True)
class VeeringTriangulation:
    tets: tuple[Tetrahedron, ...]
    edge_of: tuple[tuple[int, ...], ...]
    face_of: tuple[tuple[int, ...], ...]
    num_edges: int
    num_faces: int
    colors: Optional[tuple[str, ...]] = None
    name: str = ""
    metadata: Mapping[str, Any] = field(default_factory=dict, compare=False)

    @property
    def num_tets(self) -> int:
        return len(self.tets)

    @cached_property
    def edge_classes(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        classes: list[list[tuple[int, int]]] = [[] for _ in range(self.num_edges)]
        for t, row in enumerate(self.edge_of):
            for e, cls in enumerate(row):
                classes[cls].append((t, e))
        return tuple(tuple(slots) for slots in classes)

    @cached_property
    def face_classes(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        classes: list[list[tuple[int, int]]] = [[] for _ in range(self.num_faces)]
        for t, row in enumerate(self.face_of):
            for f, cls in enumerate(row):
                classes[cls].append((t, f))
        return tuple(tuple(slots) for slots in classes)

    def top_edge(self, t: int) -> int:
        return self.edge_of[t][self.tets[t].top_edge]

    def bottom_edge(self, t: int) -> int:
        return self.edge_of[t][self.tets[t].bottom_edge]

    def tets_with_top(self, edge: int) -> list[int]:
        return [t for t in range(self.num_tets) if self.top_edge(t) == edge]

    def face_sides(self, face: int) -> tuple[Optional[int], Optional[int]]:
        """(tet below, tet above) of a face class; None where the coorientation fails."""
        below = above = None
        for t, f in self.face_classes[face]:
            if self.tets[t].is_top_face(f):
                below = t
            else:
                above = t
        return below, above


def _union_find_classes(slots: Iterable[tuple[int, int]], unions: Iterable[tuple]) -> dict:
    parent: dict = {slot: slot for slot in slots}

    def find(item):
        while parent[item] != item:
            parent[item] = parent[parent[item]]
            item = parent[item]
        return item

    for left, right in unions:
        root_left, root_right = find(left), find(right)
        if root_left != root_right:
            parent[max(root_left, root_right)] = min(root_left, root_right)

    labels: dict = {}
    result: dict = {}
    for slot in parent:
        root = find(slot)
        if root not in labels:
            labels[root] = len(labels)
        result[slot] = labels[root]
    return result


def _parse_gluing(raw: Any, t: int, f: int, size: int) -> Gluing:
    if not isinstance(raw, (list, tuple)) or len(raw) != 3:
        raise InputFormatError(f"tet {t} face {f}: gluing must be [tet, face, perm]")
    target_tet, target_face, perm = raw
    if not isinstance(target_tet, int) or not isinstance(target_face, int):
        raise InputFormatError(f"tet {t} face {f}: target tet/face must be integers")
    if not 0 <= target_tet < size or not 0 <= target_face < 4:
        raise InputFormatError(f"tet {t} face {f}: dangling gluing to ({target_tet}, {target_face})")
    if not isinstance(perm, (list, tuple)) or sorted(perm) != [0, 1, 2, 3]:
        raise InputFormatError(f"tet {t} face {f}: {perm!r} is not a permutation of 0..3")
    if perm[f] != target_face:
        raise InputFormatError(
            f"tet {t} face {f}: permutation sends vertex {f} to {perm[f]}, expected {target_face}"
        )
    return Gluing(target_tet, target_face, tuple(int(v) for v in perm))  # type: ignore[arg-type]


def build_triangulation(
    tets: Sequence[Tetrahedron],
    colors: Optional[Sequence[str]] = None,
    *,
    name: str = "",
    metadata: Optional[Mapping[str, Any]] = None,
) -> VeeringTriangulation:
    """Check the gluing involution and derive edge/face classes by union-find."""
    if not tets:
        raise InputFormatError("triangulation has no tetrahedra")
    for t, tet in enumerate(tets):
        for f, gluing in enumerate(tet.glue):
            if (gluing.tet, gluing.face) == (t, f):
                raise InputFormatError(f"tet {t} face {f} is glued to itself")
            back = tets[gluing.tet].glue[gluing.face]
            if (back.tet, back.face) != (t, f) or back.perm != inverse_permutation(gluing.perm):
                raise InputFormatError(
                    f"non-involutive gluing: tet {t} face {f} -> tet {gluing.tet} face {gluing.face}"
                    f" but that face goes to tet {back.tet} face {back.face}"
                )

    edge_unions = []
    face_unions = []
    for t, tet in enumerate(tets):
        for f, gluing in enumerate(tet.glue):
            face_unions.append(((t, f), (gluing.tet, gluing.face)))
            for u, v in LOCAL_EDGES:
                if f in (u, v):
                    continue
                target = local_edge(gluing.perm[u], gluing.perm[v])
                edge_unions.append(((t, local_edge(u, v)), (gluing.tet, target)))

    size = len(tets)
    edge_labels = _union_find_classes(
        ((t, e) for t in range(size) for e in range(6)), edge_unions
    )
    face_labels = _union_find_classes(
        ((t, f) for t in range(size) for f in range(4)), face_unions
    )
    edge_of = tuple(tuple(edge_labels[(t, e)] for e in range(6)) for t in range(size))
    face_of = tuple(tuple(face_labels[(t, f)] for f in range(4)) for t in range(size))
    num_edges = max(edge_labels.values()) + 1
    num_faces = max(face_labels.values()) + 1

    checked_colors = None
    if colors is not None:
        if len(colors) != num_edges or any(c not in COLORS for c in colors):
            raise InputFormatError(f"colors must give red/blue for all {num_edges} edge classes")
        checked_colors = tuple(colors)

    triangulation = VeeringTriangulation(
        tets=tuple(tets),
        edge_of=edge_of,
        face_of=face_of,
        num_edges=num_edges,
        num_faces=num_faces,
        colors=checked_colors,
        name=name,
        metadata=dict(metadata or {}),
    )
    log_event("parse", f"{name or 'triangulation'}: {size} tets, {num_edges} edges, {num_faces} faces")
    return triangulation


def triangulation_from_dict(document: Mapping[str, Any], *, name: str = "") -> VeeringTriangulation:
    if not isinstance(document, Mapping):
        raise InputFormatError("triangulation document must be a JSON object")
    raw_tets = document.get("tets")
    if not isinstance(raw_tets, list) or not raw_tets:
        raise InputFormatError("'tets' must be a non-empty list")

    tets: list[Tetrahedron] = []
    for t, raw in enumerate(raw_tets):
        if not isinstance(raw, Mapping):
            raise InputFormatError(f"tet {t} must be an object")
        glue = raw.get("glue")
        pi_pair = raw.get("pi_pair")
        if not isinstance(glue, list) or len(glue) != 4:
            raise InputFormatError(f"tet {t}: 'glue' needs exactly four entries")
        if pi_pair not in (0, 1, 2):
            raise InputFormatError(f"tet {t}: 'pi_pair' must be 0, 1 or 2")
        gluings = tuple(_parse_gluing(entry, t, f, len(raw_tets)) for f, entry in enumerate(glue))
        tets.append(Tetrahedron(glue=gluings, pi_pair=int(pi_pair)))  # type: ignore[arg-type]

    colors = None
    raw_colors = document.get("colors")
    if raw_colors is not None:
        if not isinstance(raw_colors, Mapping):
            raise InputFormatError("'colors' must map edge ids to red/blue")
        try:
            indexed = {int(key): value for key, value in raw_colors.items()}
        except ValueError as exc:
            raise InputFormatError("color keys must be edge ids") from exc
        colors = [indexed.get(e) for e in range(len(indexed))]
        if sorted(indexed) != list(range(len(indexed))):
            raise InputFormatError("colors must be given for edge ids 0..n-1")

    metadata = {key: value for key, value in document.items() if key not in ("tets", "colors")}
    return build_triangulation(tets, colors, name=name or str(document.get("name", "")), metadata=metadata)


def parse_triangulation(text: str | bytes, *, name: str = "") -> VeeringTriangulation:
    """Parse the native JSON document. Validation is a separate step."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"malformed JSON: {exc}") from exc
    return triangulation_from_dict(document, name=name)


def triangulation_to_dict(triangulation: VeeringTriangulation) -> dict[str, Any]:
    document: dict[str, Any] = dict(triangulation.metadata)
    document["tets"] = [
        {
            "glue": [[g.tet, g.face, list(g.perm)] for g in tet.glue],
            "pi_pair": tet.pi_pair,
        }
        for tet in triangulation.tets
    ]
    if triangulation.colors is not None:
        document["colors"] = {str(e): color for e, color in enumerate(triangulation.colors)}
    return document


def serialize_triangulation(triangulation: VeeringTriangulation) -> str:
    return json.dumps(triangulation_to_dict(triangulation), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class EdgeCheck:
    edge: int
    pi_count: int
    top_count: int
    bottom_count: int

    @property
    def angle_ok(self) -> bool:
        return self.pi_count == 2

    @property
    def top_ok(self) -> bool:
        return self.top_count == 1

    @property
    def bottom_ok(self) -> bool:
        return self.bottom_count == 1

    @property
    def ok(self) -> bool:
        return self.angle_ok and self.top_ok and self.bottom_ok


@dataclass(frozen=True)
class ValidationReport:
    edges: tuple[EdgeCheck, ...]
    face_coorientation: tuple[bool, ...]
    odd_gluings: tuple[bool, ...]  # per tet: all four gluing permutations odd
    edge_count_ok: bool

    @property
    def ok(self) -> bool:
        return (
            all(check.ok for check in self.edges)
            and all(self.face_coorientation)
            and all(self.odd_gluings)
            and self.edge_count_ok
        )

    @property
    def failing_edges(self) -> list[int]:
        return [check.edge for check in self.edges if not check.ok]

    def failures(self) -> list[str]:
        messages = []
        for check in self.edges:
            if not check.angle_ok:
                messages.append(f"edge {check.edge}: {check.pi_count} pi-angles (expected 2)")
            if not check.top_ok:
                messages.append(f"edge {check.edge}: top edge of {check.top_count} tetrahedra")
            if not check.bottom_ok:
                messages.append(f"edge {check.edge}: bottom edge of {check.bottom_count} tetrahedra")
        for face, ok in enumerate(self.face_coorientation):
            if not ok:
                messages.append(f"face {face}: not glued top-to-bottom")
        for t, ok in enumerate(self.odd_gluings):
            if not ok:
                messages.append(f"tet {t}: orientation-preserving face gluing")
        if not self.edge_count_ok:
            messages.append("number of edge classes differs from number of tetrahedra")
        return messages

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "edges": [
                {
                    "edge": check.edge,
                    "angle_sum_ok": check.angle_ok,
                    "top_once": check.top_ok,
                    "bottom_once": check.bottom_ok,
                    "pi_count": check.pi_count,
                }
                for check in self.edges
            ],
            "faces_cooriented": list(self.face_coorientation),
            "orientation_ok": all(self.odd_gluings),
            "edge_count_ok": self.edge_count_ok,
            "failures": self.failures(),
        }


def validate_taut(triangulation: VeeringTriangulation) -> ValidationReport:
    pi_counts = [0] * triangulation.num_edges
    top_counts = [0] * triangulation.num_edges
    bottom_counts = [0] * triangulation.num_edges
    for t, tet in enumerate(triangulation.tets):
        for e in tet.pi_edges:
            pi_counts[triangulation.edge_of[t][e]] += 1
        top_counts[triangulation.top_edge(t)] += 1
        bottom_counts[triangulation.bottom_edge(t)] += 1

    coorientation = []
    for slots in triangulation.face_classes:
        roles = sorted(triangulation.tets[t].is_top_face(f) for t, f in slots)
        coorientation.append(roles == [False, True])

    odd = tuple(
        all(permutation_sign(g.perm) < 0 for g in tet.glue) for tet in triangulation.tets
    )
    report = ValidationReport(
        edges=tuple(
            EdgeCheck(e, pi_counts[e], top_counts[e], bottom_counts[e])
            for e in range(triangulation.num_edges)
        ),
        face_coorientation=tuple(coorientation),
        odd_gluings=odd,
        edge_count_ok=triangulation.num_edges == triangulation.num_tets,
    )
    log_event("validate", f"ok={report.ok} failures={len(report.failures())}")
    return report


def require_valid(triangulation: VeeringTriangulation) -> None:
    report = validate_taut(triangulation)
    if not report.ok:
        raise DomainError("triangulation is not taut: " + "; ".join(report.failures()))


# ---------------------------------------------------------------------------
# veering colors


@dataclass(frozen=True)
class Coloring:
    colors: tuple[str, ...]
    handedness: str  # color carried by the 0a/kb equatorial pair in every tetrahedron
    inferred: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "colors": {str(e): c for e, c in enumerate(self.colors)},
            "handedness": self.handedness,
            "inferred": self.inferred,
        }


def _pair_classes(triangulation: VeeringTriangulation) -> tuple[set[int], set[int]]:
    """Edge classes met as 0a/kb edges and as ak/b0 edges over all tetrahedra."""
    first: set[int] = set()
    second: set[int] = set()
    for t, tet in enumerate(triangulation.tets):
        e0, e1, e2, e3 = (triangulation.edge_of[t][e] for e in tet.equatorial_edges)
        first.update((e0, e2))
        second.update((e1, e3))
    return first, second


def veering_handedness(triangulation: VeeringTriangulation, colors: Sequence[str]) -> Optional[str]:
    """Return the handedness the coloring realizes, or None when some tetrahedron fails."""
    if len(colors) != triangulation.num_edges:
        return None
    first, second = _pair_classes(triangulation)
    for handedness in COLORS:
        if all(colors[e] == handedness for e in first) and all(
            colors[e] == other_color(handedness) for e in second
        ):
            return handedness
    return None


def is_veering_coloring(triangulation: VeeringTriangulation, colors: Sequence[str]) -> bool:
    return veering_handedness(triangulation, colors) is not None


def infer_colors(triangulation: VeeringTriangulation) -> Coloring:
    require_valid(triangulation)
    if triangulation.colors is not None:
        handedness = veering_handedness(triangulation, triangulation.colors)
        if handedness is None:
            raise DomainError("supplied colors violate the veering condition")
        return Coloring(triangulation.colors, handedness, inferred=False)

    first, second = _pair_classes(triangulation)
    clash = sorted(first & second)
    if clash:
        raise DomainError(f"not veering: edge classes {clash} must be both red and blue")
    handedness = "blue" if 0 in second else "red"
    colors = tuple(
        other_color(handedness) if e in second else handedness for e in range(triangulation.num_edges)
    )
    log_event("colors", f"handedness={handedness} colors={colors}")
    return Coloring(colors, handedness)


# ---------------------------------------------------------------------------
# edge links


def edge_link(triangulation: VeeringTriangulation, edge: int) -> EdgeLink:
    if not 0 <= edge < triangulation.num_edges:
        raise DomainError(f"edge id {edge} out of range 0..{triangulation.num_edges - 1}")
    below = triangulation.tets_with_top(edge)
    if len(below) != 1:
        raise DomainError(f"edge {edge} is the top edge of {len(below)} tetrahedra")
    start_tet = below[0]
    tet = triangulation.tets[start_tet]
    u, v = tet.top_vertices
    a, b = tet.bottom_vertices
    corners: list[EdgeCorner] = []
    faces: list[int] = []
    current, leave, enter = start_tet, a, b
    limit = 6 * triangulation.num_tets

    while True:
        here = triangulation.tets[current]
        slot = local_edge(u, v)
        if slot == here.top_edge:
            role = "top"
        elif slot == here.bottom_edge:
            role = "bottom"
        else:
            role = "equatorial"
        corners.append(EdgeCorner(current, slot, enter, leave, role))
        faces.append(triangulation.face_of[current][leave])
        gluing = here.glue[leave]
        current, u, v, enter = gluing.tet, gluing.perm[u], gluing.perm[v], gluing.face
        leave = next(w for w in range(4) if w not in (u, v, enter))
        if (current, local_edge(u, v)) == (start_tet, tet.top_edge):
            break
        if len(corners) > limit:
            raise DomainError(f"edge {edge}: link walk does not close")

    top_positions = [i for i, corner in enumerate(corners) if corner.role == "bottom"]
    if len(top_positions) != 1 or any(c.role == "top" for c in corners[1:]):
        raise DomainError(f"edge {edge}: link does not have exactly two pi-corners")
    return EdgeLink(edge, tuple(corners), tuple(faces), top_positions[0])


def all_edge_links(triangulation: VeeringTriangulation) -> list[EdgeLink]:
    return [edge_link(triangulation, e) for e in range(triangulation.num_edges)]
