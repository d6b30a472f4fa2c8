"""Built-in fixtures and random generators.

Every fixture is a JSON-ready document; the CLI accepts ``fixture:NAME`` anywhere a path
is expected and parses the document with the subcommand's own reader.
"""

from __future__ import annotations

import copy
from typing import Any, Optional

import numpy as np

from .branched_surface import FlowGraph, flow_graph_from_dict
from .cones import RationalCone, RestrictionMap, cone_from_dict
from .dynamics import WeightedDigraph
from .errors import InputFormatError
from .train_track import FoldingCycle, cycle_from_dict
from .triangulation import VeeringTriangulation, triangulation_from_dict

FIXTURE_PREFIX = "fixture:"

# Layered triangulation of the punctured-torus bundle with monodromy [[2, 1], [1, 1]].
_FIGURE_EIGHT = {
    "name": "figure-eight",
    "tets": [
        {
            "glue": [[1, 2, [2, 1, 0, 3]], [1, 3, [0, 3, 2, 1]], [1, 1, [0, 2, 1, 3]], [1, 0, [3, 1, 2, 0]]],
            "pi_pair": 0,
        },
        {
            "glue": [[0, 3, [3, 1, 2, 0]], [0, 2, [0, 2, 1, 3]], [0, 0, [2, 1, 0, 3]], [0, 1, [0, 3, 2, 1]]],
            "pi_pair": 0,
        },
    ],
    "colors": {"0": "red", "1": "blue"},
    "fiber_class": [1, 1, 0, 0],
    "monodromy": [[2, 1], [1, 1]],
}

# Same manifold with the two tetrahedra listed in the other order; colors left to inference.
_FIGURE_EIGHT_SWAPPED = {
    "name": "figure-eight-swapped",
    "tets": [
        {
            "glue": [[1, 3, [3, 1, 2, 0]], [1, 2, [0, 2, 1, 3]], [1, 0, [2, 1, 0, 3]], [1, 1, [0, 3, 2, 1]]],
            "pi_pair": 0,
        },
        {
            "glue": [[0, 2, [2, 1, 0, 3]], [0, 3, [0, 3, 2, 1]], [0, 1, [0, 2, 1, 3]], [0, 0, [3, 1, 2, 0]]],
            "pi_pair": 0,
        },
    ],
    "monodromy": [[2, 1], [1, 1]],
}


def _with_pi_pair(document: dict, tet: int, pi_pair: int, name: str) -> dict:
    variant = copy.deepcopy(document)
    variant["name"] = name
    variant["tets"][tet]["pi_pair"] = pi_pair
    variant.pop("colors", None)
    variant.pop("fiber_class", None)
    return variant


_LETTERS = {"R": np.array([[1, 1], [0, 1]]), "L": np.array([[1, 0], [1, 1]])}


def _point(vector) -> tuple[int, int]:
    return int(vector[0]), int(vector[1])


def _word_frames(word: str) -> tuple[list[np.ndarray], np.ndarray]:
    """Frames of an R/L word; the last frame is the monodromy."""
    frame = np.eye(2, dtype=int)
    frames = []
    for letter in word:
        frame = frame @ _LETTERS[letter]
        frames.append(frame)
    return frames, frame


def _face_match(source: dict[int, tuple[int, int]], target: dict[tuple[int, int], int]) -> Optional[dict[int, int]]:
    anchor = next(iter(source.values()))
    for point in target:
        dx, dy = point[0] - anchor[0], point[1] - anchor[1]
        image = {v: (x + dx, y + dy) for v, (x, y) in source.items()}
        if all(p in target for p in image.values()):
            return {v: target[p] for v, p in image.items()}
    return None


def _layered_document(name: str, frames: list[np.ndarray], monodromy: np.ndarray) -> dict[str, Any]:
    """Layered taut triangulation of a punctured-torus bundle, one flip per frame.

    A frame's columns ``p, q`` put tetrahedron vertices 0, 1, 2, 3 at ``0, p+q, p, q`` in the
    plane, so faces 0 and 1 sit on the surface below and faces 2 and 3 on the surface above.
    The last tetrahedron's top faces meet the first one's bottom faces through ``monodromy``.
    """
    corners = []
    for frame in frames:
        p, q = np.asarray(frame, dtype=int).T
        corners.append([(0, 0), _point(p + q), _point(p), _point(q)])
    size = len(corners)
    glue: list[list[Any]] = [[None] * 4 for _ in range(size)]
    for i in range(size):
        j = (i + 1) % size
        twist = np.asarray(monodromy, dtype=int) if j == 0 else np.eye(2, dtype=int)
        for f in (2, 3):
            source = {v: corners[i][v] for v in range(4) if v != f}
            for g in (0, 1):
                target = {_point(twist @ np.array(corners[j][w])): w for w in range(4) if w != g}
                vertex_map = _face_match(source, target)
                if vertex_map is not None:
                    break
            else:
                raise InputFormatError(f"{name}: top face {f} of tet {i} meets no face below tet {j}")
            perm = [0] * 4
            perm[f] = g
            for v, w in vertex_map.items():
                perm[v] = w
            inverse = [perm.index(w) for w in range(4)]
            glue[i][f] = [j, g, perm]
            glue[j][g] = [i, f, inverse]
    return {
        "name": name,
        "tets": [{"glue": row, "pi_pair": 0} for row in glue],
        "fiber_class": [1, 1] + [0] * (2 * size - 2),
        "monodromy": np.asarray(monodromy, dtype=int).tolist(),
    }


def layered_bundle(word: str) -> dict[str, Any]:
    """Veering layered triangulation of the bundle whose monodromy is the R/L ``word``."""
    if not word or set(word) - set(_LETTERS) or len(set(word)) < 2:
        raise InputFormatError(f"monodromy word {word!r} needs both letters R and L")
    frames, monodromy = _word_frames(word)
    document = _layered_document(f"layered-{word}", frames, monodromy)
    document["word"] = word
    return document


def _flip_unflip(word: str) -> dict[str, Any]:
    """Taut but not veering: flip the diagonal u+v and flip it straight back before ``word``."""
    frames, monodromy = _word_frames(word)
    detour = [np.array([[0, -1], [1, 0]]), np.eye(2, dtype=int)]
    return _layered_document(f"flip-unflip-{word}", detour + frames, monodromy)


_GOLDEN = {
    "name": "golden",
    "vertices": [0, 1],
    "num_faces": 1,
    "edges": [
        {"src": 0, "dst": 0, "crossings": [0]},
        {"src": 0, "dst": 1, "crossings": [0]},
        {"src": 1, "dst": 0, "crossings": [0]},
    ],
}

# Two cut components {0, 1} and {2, 3}; faces 4 and 5 join them.
_TWO_COMPONENT = {
    "name": "two-component",
    "vertices": [0, 1, 2, 3],
    "num_faces": 6,
    "num_tets": 4,
    "dual_edges": [[0, 1], [1, 0], [2, 3], [3, 2], [1, 2], [3, 0]],
    "edges": [
        {"src": 0, "dst": 1, "tet": 1, "src_tet": 0, "crossings": [0]},
        {"src": 0, "dst": 1, "tet": 1, "src_tet": 0, "crossings": [0]},
        {"src": 1, "dst": 0, "tet": 0, "src_tet": 1, "crossings": [1]},
        {"src": 2, "dst": 3, "tet": 3, "src_tet": 2, "crossings": [2]},
        {"src": 2, "dst": 3, "tet": 3, "src_tet": 2, "crossings": [2]},
        {"src": 2, "dst": 3, "tet": 3, "src_tet": 2, "crossings": [2]},
        {"src": 3, "dst": 2, "tet": 2, "src_tet": 3, "crossings": [3]},
        {"src": 1, "dst": 2, "tet": 2, "src_tet": 1, "crossings": [4]},
        {"src": 3, "dst": 0, "tet": 0, "src_tet": 3, "crossings": [5]},
    ],
    "eta": [0, 0, 0, 0, 1, 1],
}

_TORUS_TRACK = {
    "branches": [0, 1],
    "switches": [{"sideA": [[0, 0], [1, 0]], "sideB": [[0, 1], [1, 1]]}],
    "large_ok": True,
}

_PUNCTURED_TORUS = {
    "name": "punctured-torus",
    "track": _TORUS_TRACK,
    "moves": [
        {"branch": 0, "over": [1], "switch": 0, "side": "A"},
        {"branch": 1, "over": [0], "switch": 0, "side": "A"},
    ],
    "relabel": [0, 1],
}

_IDENTITY_CYCLE = {"name": "identity", "track": _TORUS_TRACK, "moves": [], "relabel": [0, 1]}


def _endperiodic(name: str, rays: list[dict]) -> dict:
    document = copy.deepcopy(_PUNCTURED_TORUS)
    document["name"] = name
    document["rays"] = rays
    return document


_ATTRACTING_RAY = {"branches": [10, 11, 12], "direction": "attracting", "anchor": 0}
_REPELLING_RAY = {"branches": [20, 21], "direction": "repelling", "anchor": 1}

_TRANSLATION = {
    "name": "translation",
    "track": {"branches": [], "switches": []},
    "moves": [],
    "relabel": [],
    "rays": [{"branches": [30, 31, 32], "direction": "repelling", "anchor": None}],
}

_PLANAR_CONE = {"name": "planar", "dim": 2, "rays": [[1, 0], [1, 1]], "adjacent_to_boundary": True}
_PYRAMID_CONE = {"name": "pyramid", "dim": 3, "rays": [[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]]}
_HALF_PLANE_CONE = {"name": "half-plane", "dim": 2, "ineqs": [[0, 1]]}

LAYERED_WORDS = ("RRL", "RRRL", "RRLL", "RRRRL", "RRRLL")

FIXTURE_DOCUMENTS: dict[str, dict[str, Any]] = {
    "figure-eight": _FIGURE_EIGHT,
    "figure-eight-swapped": _FIGURE_EIGHT_SWAPPED,
    "figure-eight-bad-angles": _with_pi_pair(_FIGURE_EIGHT, 0, 1, "figure-eight-bad-angles"),
    "figure-eight-double-top": _with_pi_pair(_FIGURE_EIGHT, 0, 2, "figure-eight-double-top"),
    **{f"layered-{word}": layered_bundle(word) for word in LAYERED_WORDS},
    "flip-unflip-RL": _flip_unflip("RL"),
    "golden": _GOLDEN,
    "two-component": _TWO_COMPONENT,
    "punctured-torus": _PUNCTURED_TORUS,
    "identity": _IDENTITY_CYCLE,
    "endperiodic-attracting": _endperiodic("endperiodic-attracting", [_ATTRACTING_RAY]),
    "endperiodic-repelling": _endperiodic("endperiodic-repelling", [_REPELLING_RAY]),
    "endperiodic-both": _endperiodic("endperiodic-both", [_ATTRACTING_RAY, _REPELLING_RAY]),
    "translation": _TRANSLATION,
    "planar-cone": _PLANAR_CONE,
    "pyramid-cone": _PYRAMID_CONE,
    "half-plane-cone": _HALF_PLANE_CONE,
}

ENDPERIODIC_FIXTURES = ("endperiodic-attracting", "endperiodic-repelling", "endperiodic-both")
VEERING_FIXTURES = ("figure-eight",) + tuple(f"layered-{word}" for word in LAYERED_WORDS)


def available_fixtures() -> list[str]:
    return sorted(FIXTURE_DOCUMENTS)


def fixture_document(name: str) -> dict[str, Any]:
    if name.startswith(FIXTURE_PREFIX):
        name = name[len(FIXTURE_PREFIX):]
    try:
        return copy.deepcopy(FIXTURE_DOCUMENTS[name])
    except KeyError:
        raise InputFormatError(f"unknown fixture {name!r}; choose from {', '.join(available_fixtures())}") from None


def figure_eight() -> VeeringTriangulation:
    return triangulation_from_dict(fixture_document("figure-eight"))


def triangulation_fixture(name: str) -> VeeringTriangulation:
    return triangulation_from_dict(fixture_document(name))


def flow_graph_fixture(name: str) -> FlowGraph:
    return flow_graph_from_dict(fixture_document(name))


def cycle_fixture(name: str) -> FoldingCycle:
    return cycle_from_dict(fixture_document(name))


def cone_fixture(name: str) -> RationalCone:
    return cone_from_dict(fixture_document(name))


def projection_to_line() -> RestrictionMap:
    return RestrictionMap.from_rows([[1, 0]], kernel_dimension=1)


def golden_loops(w1: int = 1, w2: int = 2) -> WeightedDigraph:
    """One vertex, two loops: lambda solves t**w1 + t**w2 = 1."""
    return WeightedDigraph((0,), ((0, 0, w1), (0, 0, w2)))


# ---------------------------------------------------------------------------
# random generators (all driven by numpy Generators so suites are reproducible)


def random_strongly_connected(
    rng: np.random.Generator,
    *,
    max_vertices: int = 6,
    max_edges: int = 12,
    max_weight: int = 3,
    min_vertices: int = 2,
    vertices: Optional[int] = None,
    loops: bool = False,
) -> WeightedDigraph:
    """A Hamiltonian cycle on a random vertex order plus random extra edges.

    Weights are drawn from 1..max_weight, so no cycle has weight 0. With ``loops`` every
    vertex also gets a self-loop, which makes the graph primitive.
    """
    size = vertices or int(rng.integers(min_vertices, max_vertices + 1))
    order = [int(v) for v in rng.permutation(size)]
    edges = [(order[i], order[(i + 1) % size]) for i in range(size)]
    if loops:
        edges.extend((v, v) for v in range(size))
    budget = max(max_edges, len(edges))
    extra = int(rng.integers(0, budget - len(edges) + 1))
    for _ in range(extra):
        edges.append((int(rng.integers(size)), int(rng.integers(size))))
    weights = rng.integers(1, max_weight + 1, size=len(edges))
    return WeightedDigraph(tuple(range(size)), tuple((u, v, int(w)) for (u, v), w in zip(edges, weights)))


def random_weight_vector(rng: np.random.Generator, size: int, max_weight: int = 3) -> tuple[int, ...]:
    return tuple(int(x) for x in rng.integers(1, max_weight + 1, size=size))


def ray_truncated_cycles(max_length: int = 5) -> list[FoldingCycle]:
    """Punctured-torus cycle with one attracting or one repelling ray tail of each length."""
    cycles = []
    for length in range(1, max_length + 1):
        for direction, anchor in (("attracting", 0), ("repelling", 1)):
            document = fixture_document("punctured-torus")
            document["name"] = f"{direction}-ray-{length}"
            document["rays"] = [
                {"branches": [100 + i for i in range(length)], "direction": direction, "anchor": anchor}
            ]
            cycles.append(cycle_from_dict(document))
    return cycles
