"""Train tracks, elementary folds, folding cycles and the transition graph G_f.

Matrices use the row convention: row ``b`` of a transition matrix lists how many times
the image of branch ``b`` runs over each branch. A carried weight vector ``c`` is pushed
forward as ``c @ M``; composites multiply in application order.

Intersection counts model a transverse curve in minimal position. That is an input
assumption: ``i_n`` is exact for the model and an upper bound otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Mapping, Optional, Sequence

import networkx as nx
import numpy as np

from .dynamics import (
    UNIT,
    GrowthResult,
    SolverOptions,
    WeightedDigraph,
    exact_power,
    growth_rate,
    log_slope,
    spectral_radius,
)
from .errors import DomainError, EmptyCoreError, InputFormatError
from .utils.debug import log_event

HalfBranch = tuple[int, int]  # (branch id, end 0 or 1)
SIDES = ("A", "B")
ATTRACTING = "attracting"
REPELLING = "repelling"


@dataclass(frozen=True)
class Switch:
    side_a: tuple[HalfBranch, ...]
    side_b: tuple[HalfBranch, ...]

    def side(self, name: str) -> tuple[HalfBranch, ...]:
        return self.side_a if name == "A" else self.side_b

    def with_side(self, name: str, entries: Iterable[HalfBranch]) -> "Switch":
        entries = tuple(entries)
        return replace(self, side_a=entries) if name == "A" else replace(self, side_b=entries)


@dataclass(frozen=True)
class TrainTrack:
    branches: tuple[int, ...]
    switches: tuple[Switch, ...]
    large_ok: bool = True

    @property
    def size(self) -> int:
        return len(self.branches)

    def index(self, branch: int) -> int:
        try:
            return self.branches.index(branch)
        except ValueError:
            raise DomainError(f"unknown branch {branch}") from None

    def locate(self, half: HalfBranch) -> tuple[int, str, int]:
        """(switch, side, position) of a half-branch."""
        for s, switch in enumerate(self.switches):
            for side in SIDES:
                entries = switch.side(side)
                if half in entries:
                    return s, side, entries.index(half)
        raise DomainError(f"half-branch {half} is not attached to any switch")

    def replace_switch(self, index: int, switch: Switch) -> "TrainTrack":
        switches = list(self.switches)
        switches[index] = switch
        return replace(self, switches=tuple(switches))

    def relabeled(self, mapping: Mapping[int, int]) -> "TrainTrack":
        def move(entries: tuple[HalfBranch, ...]) -> tuple[HalfBranch, ...]:
            return tuple((mapping[b], e) for b, e in entries)

        return TrainTrack(
            tuple(mapping[b] for b in self.branches),
            tuple(Switch(move(s.side_a), move(s.side_b)) for s in self.switches),
            self.large_ok,
        )

    def signature(self) -> list[tuple]:
        """Switch structure up to switch order and swapping the two sides."""
        return sorted(tuple(sorted((s.side_a, s.side_b))) for s in self.switches)


@dataclass
class TrackReport:
    ok: bool
    problems: list[str] = field(default_factory=list)
    large_branches: list[int] = field(default_factory=list)

    @property
    def lowest_position(self) -> bool:
        return not self.large_branches

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "problems": self.problems, "large_branches": self.large_branches}


def validate_track(track: TrainTrack, *, require_lowest: bool = False) -> TrackReport:
    problems: list[str] = []
    seen: dict[HalfBranch, list[tuple[int, str]]] = {}
    known = set(track.branches)
    if len(known) != len(track.branches):
        problems.append("duplicate branch ids")
    for s, switch in enumerate(track.switches):
        for side in SIDES:
            entries = switch.side(side)
            if not entries:
                problems.append(f"switch {s} has nothing on side {side}")
            for half in entries:
                if half[0] not in known or half[1] not in (0, 1):
                    problems.append(f"switch {s} side {side} lists unknown half-branch {half}")
                seen.setdefault(half, []).append((s, side))

    large = []
    for branch in track.branches:
        places = [seen.get((branch, end), []) for end in (0, 1)]
        if any(len(p) != 1 for p in places):
            problems.append(f"branch {branch} does not have exactly two attached ends")
            continue
        if places[0][0] == places[1][0]:
            problems.append(f"branch {branch} is attached twice to switch {places[0][0][0]} side {places[0][0][1]}")
            continue
        sole = [
            len(track.switches[s].side(side)) == 1
            for (s, side) in (places[0][0], places[1][0])
        ]
        if all(sole):
            large.append(branch)

    if large and (require_lowest or not track.large_ok):
        problems.append(f"large branches {large}: track is not in lowest position")
    return TrackReport(ok=not problems, problems=problems, large_branches=large)


def switch_conditions_hold(track: TrainTrack, weights: Sequence[int]) -> bool:
    for switch in track.switches:
        a = sum(weights[track.index(b)] for b, _ in switch.side_a)
        b = sum(weights[track.index(b)] for b, _ in switch.side_b)
        if a != b:
            return False
    return True


# ---------------------------------------------------------------------------
# folds


@dataclass(frozen=True)
class FoldMove:
    """Fold ``branch`` over ``targets`` in order, starting at ``switch`` on ``side``."""

    branch: int
    targets: tuple[int, ...]
    switch: int
    side: str = "A"

    def matrix(self, track: TrainTrack) -> np.ndarray:
        result = np.identity(track.size, dtype=object)
        row = track.index(self.branch)
        for target in self.targets:
            result[row, track.index(target)] += 1
        return result


@dataclass(frozen=True)
class FoldResult:
    track: TrainTrack
    matrix: np.ndarray


def apply_fold(track: TrainTrack, move: FoldMove) -> FoldResult:
    if not move.targets:
        raise DomainError("a fold must map the branch over at least one other branch")
    if move.branch in move.targets or len(set(move.targets)) != len(move.targets):
        raise DomainError("fold targets must be distinct branches other than the folding branch")
    if move.side not in SIDES:
        raise DomainError(f"unknown switch side {move.side!r}")
    if not 0 <= move.switch < len(track.switches):
        raise DomainError(f"switch {move.switch} does not exist")

    current = track
    switch_id, side = move.switch, move.side
    for target in move.targets:
        entries = current.switches[switch_id].side(side)
        mine = [h for h in entries if h[0] == move.branch]
        theirs = [h for h in entries if h[0] == target]
        if not mine or not theirs:
            raise DomainError(
                f"branches {move.branch} and {target} do not meet at switch {switch_id} side {side}"
            )
        b_half, c_half = mine[0], theirs[0]
        b_pos, c_pos = entries.index(b_half), entries.index(c_half)
        if abs(b_pos - c_pos) != 1:
            raise DomainError(f"branches {move.branch} and {target} are not adjacent at switch {switch_id}")

        current = current.replace_switch(
            switch_id, current.switches[switch_id].with_side(side, (h for h in entries if h != b_half))
        )
        far_switch, far_side, _ = current.locate((target, 1 - c_half[1]))
        landing = "B" if far_side == "A" else "A"
        existing = current.switches[far_switch].side(landing)
        placed = (b_half, *existing) if b_pos < c_pos else (*existing, b_half)
        current = current.replace_switch(far_switch, current.switches[far_switch].with_side(landing, placed))
        switch_id, side = far_switch, landing

    log_event("fold", f"{move.branch} over {list(move.targets)} at switch {move.switch}{move.side}")
    return FoldResult(current, move.matrix(track))


def push_curve(track: TrainTrack, weights: Sequence[int], move: FoldMove) -> tuple[TrainTrack, list[int]]:
    """Image of a carried weight vector under one fold, checked against the folded track."""
    if not switch_conditions_hold(track, weights):
        raise DomainError("weights violate the switch conditions")
    folded = apply_fold(track, move)
    image = [int(x) for x in np.array([int(w) for w in weights], dtype=object).dot(folded.matrix)]
    if not switch_conditions_hold(folded.track, image):
        raise DomainError("pushed weights violate the folded track's switch conditions")
    return folded.track, image


# ---------------------------------------------------------------------------
# folding cycles


@dataclass(frozen=True)
class RayEnd:
    """A truncated periodic ray tail r_1..r_k of extra branches.

    Attracting rays are fed by ``anchor`` and shift outward, the last branch mapping to
    itself; repelling rays shift inward and r_1 lands on ``anchor`` (nowhere when None).
    """

    branches: tuple[int, ...]
    direction: str = ATTRACTING
    anchor: Optional[int] = None


@dataclass(frozen=True)
class FoldingCycle:
    track: TrainTrack
    moves: tuple[FoldMove, ...] = ()
    relabel: tuple[int, ...] = ()  # relabel[i]: branch of V_0 that branch i of V_m becomes
    rays: tuple[RayEnd, ...] = ()
    name: str = ""

    @property
    def labels(self) -> tuple[int, ...]:
        return (*self.track.branches, *(b for ray in self.rays for b in ray.branches))


def _relabel_matrix(cycle: FoldingCycle, final: TrainTrack) -> np.ndarray:
    size = cycle.track.size
    relabel = cycle.relabel or cycle.track.branches
    if sorted(relabel) != sorted(cycle.track.branches) or len(relabel) != size:
        raise DomainError("relabeling is not a bijection of branches")
    mapping = dict(zip(final.branches, relabel))
    if final.relabeled(mapping).signature() != cycle.track.signature():
        raise DomainError("relabeling does not carry the final track onto the initial one")
    matrix = np.zeros((size, size), dtype=object)
    for i, branch in enumerate(final.branches):
        matrix[i, cycle.track.index(mapping[branch])] = 1
    return matrix


def composed_matrix(cycle: FoldingCycle) -> np.ndarray:
    """W = M_1 ... M_m P, extended by the ray-tail rows and columns."""
    current = cycle.track
    product = np.identity(current.size, dtype=object)
    for move in cycle.moves:
        folded = apply_fold(current, move)
        product = product.dot(folded.matrix)
        current = folded.track
    core = product.dot(_relabel_matrix(cycle, current))

    labels = cycle.labels
    if len(set(labels)) != len(labels):
        raise DomainError("ray branch ids clash with track branch ids")
    size = len(labels)
    full = np.zeros((size, size), dtype=object)
    n = cycle.track.size
    full[:n, :n] = core
    where = {label: i for i, label in enumerate(labels)}
    for ray in cycle.rays:
        if not ray.branches:
            raise DomainError("a ray end needs at least one branch")
        if ray.anchor is not None and ray.anchor not in cycle.track.branches:
            raise DomainError(f"ray anchor {ray.anchor} is not a track branch")
        idx = [where[b] for b in ray.branches]
        if ray.direction == ATTRACTING:
            for here, there in zip(idx, idx[1:]):
                full[here, there] += 1
            full[idx[-1], idx[-1]] += 1
            if ray.anchor is not None:
                full[where[ray.anchor], idx[0]] += 1
        elif ray.direction == REPELLING:
            for here, there in zip(idx[1:], idx):
                full[here, there] += 1
            if ray.anchor is not None:
                full[idx[0], where[ray.anchor]] += 1
        else:
            raise DomainError(f"unknown ray direction {ray.direction!r}")
    return full


@dataclass(frozen=True)
class TransitionGraph:
    labels: tuple[int, ...]
    matrix: np.ndarray  # exact integers
    digraph: WeightedDigraph
    simple: tuple[bool, ...]  # per digraph edge

    @property
    def non_simple_bundles(self) -> int:
        return sum(1 for row in self.matrix.tolist() if sum(int(x) for x in row) > 1)

    def counts(self, n: int) -> np.ndarray:
        return exact_power(self.matrix, n)


def transition_graph(cycle: FoldingCycle) -> TransitionGraph:
    matrix = composed_matrix(cycle)
    labels = cycle.labels
    edges, simple = [], []
    for i, row in enumerate(matrix.tolist()):
        image_length = sum(int(x) for x in row)
        for j, count in enumerate(row):
            for _ in range(int(count)):
                edges.append((i, j, 1))
                simple.append(image_length == 1)
    digraph = WeightedDigraph(tuple(range(len(labels))), tuple(edges))
    log_event("transition_graph", f"{len(labels)} branches, {len(edges)} edges")
    return TransitionGraph(labels, matrix, digraph, tuple(simple))


@dataclass(frozen=True)
class GfGrowth:
    lam: float
    translation: bool  # no exponential growth: empty core or bounded cycle counts
    empty_core: bool = False
    component: tuple[int, ...] = ()  # branch labels of the recurrent component achieving lam
    result: Optional[GrowthResult] = None

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "lambda": self.lam,
            "translation": self.translation,
            "empty_core": self.empty_core,
            "component": list(self.component),
        }
        if self.result is not None:
            payload["growth"] = self.result.to_dict()
        return payload


def gf_growth(graph: TransitionGraph, options: Optional[SolverOptions] = None) -> GfGrowth:
    try:
        result = growth_rate(graph.digraph, UNIT, options)
    except EmptyCoreError:
        return GfGrowth(lam=1.0, translation=True, empty_core=True)

    matrix = np.array(graph.matrix.tolist(), dtype=float)
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(len(graph.labels)))
    digraph.add_edges_from((u, v) for u, v, _ in graph.digraph.edges)
    best, best_rho = (), -1.0
    for component in nx.strongly_connected_components(digraph):
        members = sorted(component)
        block = matrix[np.ix_(members, members)]
        if not block.any():
            continue
        rho = spectral_radius(block)
        if rho > best_rho:
            best, best_rho = tuple(graph.labels[i] for i in members), rho
    return GfGrowth(lam=result.lam, translation=result.bounded, component=best, result=result)


@dataclass(frozen=True)
class IntersectionGrowth:
    values: tuple[int, ...]
    slope: float
    c: tuple[int, ...] = ()
    d: tuple[int, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {"values": [str(v) for v in self.values], "slope": self.slope, "c": list(self.c), "d": list(self.d)}


def intersection_growth(
    cycle: FoldingCycle,
    c: Sequence[int],
    d: Sequence[int],
    n_max: int,
    *,
    cap: int = 400,
    graph: Optional[TransitionGraph] = None,
) -> IntersectionGrowth:
    """i_n = sum_j d_j (c W^n)_j for n = 1..n_max, with the slope of log i_n over the trailing half."""
    if n_max < 1 or n_max > cap:
        raise DomainError(f"n_max must lie in 1..{cap}")
    graph = graph or transition_graph(cycle)
    size = len(graph.labels)
    if len(c) != size or len(d) != size:
        raise DomainError(f"curve vectors need {size} entries")
    if any(x < 0 for x in (*c, *d)):
        raise DomainError("curve weights must be nonnegative")
    if not switch_conditions_hold(cycle.track, c[: cycle.track.size]):
        raise DomainError("carried curve violates the switch conditions")

    row = np.array([int(x) for x in c], dtype=object)
    dual = np.array([int(x) for x in d], dtype=object)
    values = []
    for _ in range(n_max):
        row = row.dot(graph.matrix)
        values.append(int(row.dot(dual)))
    slope = log_slope(values, n_max // 2 + 1, n_max)
    return IntersectionGrowth(tuple(values), slope, tuple(int(x) for x in c), tuple(int(x) for x in d))


def curated_curves(cycle: FoldingCycle) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Carried candidates (all track branches, each ray branch) and transverse candidates."""
    n, size = cycle.track.size, len(cycle.labels)
    carried = []
    everything = tuple([1] * n + [0] * (size - n))
    if switch_conditions_hold(cycle.track, everything[:n]):
        carried.append(everything)
    for i in range(n, size):
        carried.append(tuple(int(i == j) for j in range(size)))
    transverse = [tuple([1] * size), *(tuple(int(i == j) for j in range(size)) for i in range(size))]
    return carried, transverse


def best_intersection_growth(
    cycle: FoldingCycle,
    n_max: int,
    *,
    cap: int = 400,
    pairs: Optional[Iterable[tuple[Sequence[int], Sequence[int]]]] = None,
) -> IntersectionGrowth:
    graph = transition_graph(cycle)
    if pairs is None:
        carried, transverse = curated_curves(cycle)
        pairs = [(c, d) for c in carried for d in transverse]
    best: Optional[IntersectionGrowth] = None
    for c, d in pairs:
        trial = intersection_growth(cycle, c, d, n_max, cap=cap, graph=graph)
        if best is None or trial.slope > best.slope:
            best = trial
    if best is None:
        raise DomainError("no carried curve satisfies the switch conditions")
    return best


# ---------------------------------------------------------------------------
# JSON interchange


def _halves(raw: Any) -> tuple[HalfBranch, ...]:
    return tuple((int(b), int(e)) for b, e in raw)


def track_from_dict(document: Mapping[str, Any]) -> TrainTrack:
    try:
        return TrainTrack(
            branches=tuple(int(b) for b in document["branches"]),
            switches=tuple(Switch(_halves(s["sideA"]), _halves(s["sideB"])) for s in document["switches"]),
            large_ok=bool(document.get("large_ok", True)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError("track needs 'branches' and 'switches' with sideA/sideB pairs") from exc


def track_to_dict(track: TrainTrack) -> dict[str, Any]:
    return {
        "branches": list(track.branches),
        "switches": [
            {"sideA": [list(h) for h in s.side_a], "sideB": [list(h) for h in s.side_b]} for s in track.switches
        ],
        "large_ok": track.large_ok,
    }


def cycle_from_dict(document: Mapping[str, Any]) -> FoldingCycle:
    track = track_from_dict(document["track"] if "track" in document else document)
    try:
        moves = tuple(
            FoldMove(int(m["branch"]), tuple(int(t) for t in m["over"]), int(m.get("switch", 0)), str(m.get("side", "A")))
            for m in document.get("moves", [])
        )
        rays = tuple(
            RayEnd(
                tuple(int(b) for b in r["branches"]),
                str(r.get("direction", ATTRACTING)),
                None if r.get("anchor") is None else int(r["anchor"]),
            )
            for r in document.get("rays", [])
        )
        relabel = tuple(int(b) for b in document.get("relabel", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError("folding cycle moves, rays or relabel are malformed") from exc
    return FoldingCycle(track, moves, relabel, rays, str(document.get("name", "")))


def cycle_to_dict(cycle: FoldingCycle) -> dict[str, Any]:
    return {
        "name": cycle.name,
        "track": track_to_dict(cycle.track),
        "moves": [
            {"branch": m.branch, "over": list(m.targets), "switch": m.switch, "side": m.side} for m in cycle.moves
        ],
        "relabel": list(cycle.relabel),
        "rays": [
            {"branches": list(r.branches), "direction": r.direction, "anchor": r.anchor} for r in cycle.rays
        ],
    }
