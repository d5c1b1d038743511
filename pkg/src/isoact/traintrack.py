"""Widened train tracks and the exact metric on their leaf-space quotients.

A track is a finite graph with a cyclic order of edge-ends (darts) at each
vertex and a nonnegative corner width for every slot between consecutive
darts.  Each edge ``e`` carries a chart interval ``[0, W(e)]`` whose width
is the sum of the two corner widths at either end; the defining condition
is that both ends of an edge report the same width.

At a vertex, consecutive charts are glued along their corner segments by
orientation-reversing isometries.  The quotient of the disjoint charts by
these partial isometries is the object of study; with the width conditions
it is a segment-closed real tree, which the tests probe through the exact
four-point condition.

Distances are computed exactly: rational widths keep the orbit of any
rational point under the gluing groupoid finite, so the closure of the
breakpoint set is finite and Dijkstra over zero-cost gluing jumps plus
within-chart steps yields the true quotient metric as a ``Fraction``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import ConstraintViolation, InvalidCoordinate, PartitionOverflow
from .exact import format_fraction, parse_fraction

Dart = Tuple[int, int]  # (edge index, end in {0, 1})
Point = Tuple[int, Fraction]  # (edge index, chart coordinate)


@dataclass(frozen=True)
class TrainTrack:
    """Validated track data; build through :func:`make_track`."""

    vertices: Tuple[object, ...]
    edge_ends: Tuple[Tuple[object, object], ...]
    cyclic: Tuple[Tuple[object, Tuple[Dart, ...]], ...]
    a_plus: Tuple[Tuple[Dart, Fraction], ...]

    @property
    def order(self) -> Dict[object, Tuple[Dart, ...]]:
        return dict(self.cyclic)

    @property
    def corner(self) -> Dict[Dart, Fraction]:
        return dict(self.a_plus)

    def dart_vertex(self, d: Dart) -> object:
        e, end = d
        return self.edge_ends[e][end]

    def next_dart(self, d: Dart) -> Dart:
        ring = self.order[self.dart_vertex(d)]
        return ring[(ring.index(d) + 1) % len(ring)]

    def prev_dart(self, d: Dart) -> Dart:
        ring = self.order[self.dart_vertex(d)]
        return ring[(ring.index(d) - 1) % len(ring)]

    def a_minus(self, d: Dart) -> Fraction:
        return self.corner[self.prev_dart(d)]

    def width(self, e: int) -> Fraction:
        d = (e, 0)
        return self.corner[d] + self.a_minus(d)

    def view(self, d: Dart, x: Fraction) -> Fraction:
        """Chart coordinate seen from the end carrying dart ``d``."""
        return x if d[1] == 0 else self.width(d[0]) - x

    def unview(self, d: Dart, u: Fraction) -> Fraction:
        return u if d[1] == 0 else self.width(d[0]) - u

    def check_point(self, p: Point) -> Point:
        e, x = p
        if not 0 <= e < len(self.edge_ends):
            raise InvalidCoordinate(f"edge index {e} out of range")
        x = Fraction(x)
        if not 0 <= x <= self.width(e):
            raise InvalidCoordinate(f"coordinate {x} outside [0, {self.width(e)}] on edge {e}")
        return (e, x)

    def glue_images(self, p: Point) -> List[Point]:
        """All direct gluing images of a located point.

        Per end of the carrying edge: the corner segment ``[0, a+]`` in end
        view reflects into the far segment of the next chart around the
        vertex, and the far segment ``[a+, W]`` reflects back into the
        corner segment of the previous chart.
        """
        e, x = p
        out: List[Point] = []
        for end in (0, 1):
            d = (e, end)
            u = self.view(d, x)
            ap = self.corner[d]
            if u <= ap:
                d2 = self.next_dart(d)
                out.append((d2[0], self.unview(d2, self.corner[d2] + ap - u)))
            if u >= ap:
                d0 = self.prev_dart(d)
                out.append((d0[0], self.unview(d0, self.corner[d0] + ap - u)))
        return [q for q in out if q != p]


def make_track(vertices, edge_ends, cyclic, a_plus) -> TrainTrack:
    """Validate and freeze a train track.

    Checks that the cyclic orders partition the darts, that corner widths
    are nonnegative rationals covering every slot, and that the two ends of
    each edge agree on the chart width.
    """
    vertices = tuple(vertices)
    edge_ends = tuple((v, w) for v, w in edge_ends)
    vset = set(vertices)
    if len(vset) != len(vertices):
        raise ConstraintViolation("duplicate vertex labels")
    for v, w in edge_ends:
        if v not in vset or w not in vset:
            raise ConstraintViolation(f"edge end {v!r} or {w!r} is not a vertex")
    darts = [(e, end) for e in range(len(edge_ends)) for end in (0, 1)]
    ring_of: Dict[object, Tuple[Dart, ...]] = {v: tuple(map(tuple, cyclic.get(v, ()))) for v in vertices}
    listed = [d for ring in ring_of.values() for d in ring]
    if sorted(listed) != sorted(darts):
        raise ConstraintViolation("cyclic orders must list every edge-end exactly once")
    for v, ring in ring_of.items():
        for d in ring:
            e, end = d
            if edge_ends[e][end] != v:
                raise ConstraintViolation(f"dart {d} does not sit at vertex {v!r}")
    corner: Dict[Dart, Fraction] = {}
    for d in darts:
        if tuple(d) not in {tuple(k) for k in a_plus}:
            raise ConstraintViolation(f"missing corner width for slot {d}")
    for d, val in a_plus.items():
        if isinstance(val, float):
            raise ConstraintViolation("corner widths must be exact rationals")
        val = Fraction(val)
        if val < 0:
            raise ConstraintViolation(f"negative corner width at slot {d}")
        corner[tuple(d)] = val
    track = TrainTrack(
        vertices,
        edge_ends,
        tuple(sorted(ring_of.items(), key=lambda kv: vertices.index(kv[0]))),
        tuple(sorted(corner.items())),
    )
    for e in range(len(edge_ends)):
        w0 = track.corner[(e, 0)] + track.a_minus((e, 0))
        w1 = track.corner[(e, 1)] + track.a_minus((e, 1))
        if w0 != w1:
            raise ConstraintViolation(f"edge {e} widths disagree between its ends: {w0} vs {w1}")
        if w0 == 0:
            raise ConstraintViolation(f"edge {e} has zero total width")
    return track


# ---------------------------------------------------------------------------
# Exact quotient metric
# ---------------------------------------------------------------------------


class TrackMetric:
    """Exact distances between located points on a track quotient.

    The node set is the closure of chart breakpoints and query points under
    all gluing maps; rational data keeps it finite.  ``cap`` bounds the
    closure size (:class:`PartitionOverflow` beyond it).
    """

    def __init__(self, track: TrainTrack, points: Sequence[Point] = (), cap: int = 20000):
        self.track = track
        self.points = [track.check_point(p) for p in points]
        base: List[Point] = []
        for e in range(len(track.edge_ends)):
            W = track.width(e)
            vals = {Fraction(0), W}
            for end in (0, 1):
                d = (e, end)
                vals.add(track.unview(d, track.corner[d]))
            base.extend((e, x) for x in vals)
        seen = set(base)
        seen.update(self.points)
        frontier = list(seen)
        while frontier:
            if len(seen) > cap:
                raise PartitionOverflow(f"breakpoint closure exceeded {cap} points")
            nxt: List[Point] = []
            for p in frontier:
                for q in track.glue_images(p):
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        self.nodes: List[Point] = sorted(seen)
        self.node_id = {p: i for i, p in enumerate(self.nodes)}
        adj: List[List[Tuple[int, Fraction]]] = [[] for _ in self.nodes]
        per_chart: Dict[int, List[Point]] = {}
        for p in self.nodes:
            per_chart.setdefault(p[0], []).append(p)
        for chart in per_chart.values():
            chart.sort(key=lambda p: p[1])
            for a, b in zip(chart, chart[1:]):
                cost = b[1] - a[1]
                ia, ib = self.node_id[a], self.node_id[b]
                adj[ia].append((ib, cost))
                adj[ib].append((ia, cost))
        for p in self.nodes:
            ip = self.node_id[p]
            for q in self.track.glue_images(p):
                adj[ip].append((self.node_id[q], Fraction(0)))
        self.adj = adj
        self._cache: Dict[int, List[Fraction]] = {}

    def _from_source(self, src: int) -> List[Fraction]:
        if src in self._cache:
            return self._cache[src]
        dist: List[Fraction] = [None] * len(self.nodes)  # type: ignore[list-item]
        heap: List[Tuple[Fraction, int]] = [(Fraction(0), src)]
        while heap:
            d, i = heapq.heappop(heap)
            if dist[i] is not None:
                continue
            dist[i] = d
            for j, cost in self.adj[i]:
                if dist[j] is None:
                    heapq.heappush(heap, (d + cost, j))
        self._cache[src] = dist
        return dist

    def distance(self, p: Point, q: Point) -> Fraction:
        p = self.track.check_point(p)
        q = self.track.check_point(q)
        if p not in self.node_id or q not in self.node_id:
            raise InvalidCoordinate("query points must be supplied at construction")
        return self._from_source(self.node_id[p])[self.node_id[q]]

    def pairwise(self) -> List[List[Fraction]]:
        return [[self.distance(p, q) for q in self.points] for p in self.points]


def grid_metric(track: TrainTrack, points: Sequence[Point], step: Fraction = Fraction(1, 1000)):
    """Independent check metric on a uniform grid of mesh ``step``.

    Chart coordinates are snapped to multiples of ``step``; gluing images
    of grid points are again grid points whenever all widths are multiples
    of ``step``.  Distances come back as Fractions with resolution error at
    most a few steps, for cross-checking the exact metric.
    """
    step = Fraction(step)
    units: List[int] = []
    offsets: List[int] = [0]
    for e in range(len(track.edge_ends)):
        w = track.width(e) / step
        if w.denominator != 1:
            raise ConstraintViolation(f"width of edge {e} is not a multiple of the grid step")
        units.append(int(w))
        offsets.append(offsets[-1] + int(w) + 1)
    total = offsets[-1]
    if total > 200000:
        raise PartitionOverflow(f"grid has {total} nodes; coarsen the step")

    def node(e: int, k: int) -> int:
        return offsets[e] + k

    adj: List[List[Tuple[int, int]]] = [[] for _ in range(total)]
    for e in range(len(track.edge_ends)):
        for k in range(units[e]):
            adj[node(e, k)].append((node(e, k + 1), 1))
            adj[node(e, k + 1)].append((node(e, k), 1))
    for e in range(len(track.edge_ends)):
        for k in range(units[e] + 1):
            for (e2, x2) in track.glue_images((e, k * step)):
                k2 = x2 / step
                if k2.denominator != 1:
                    raise ConstraintViolation("gluing image left the grid")
                adj[node(e, k)].append((node(e2, int(k2)), 0))

    snapped = []
    for p in points:
        e, x = track.check_point(p)
        k = int(round(float(x / step)))
        k = min(max(k, 0), units[e])
        snapped.append(node(e, k))

    out: List[List[Fraction]] = []
    for src in snapped:
        dist = [None] * total
        heap: List[Tuple[int, int]] = [(0, src)]
        while heap:
            d, i = heapq.heappop(heap)
            if dist[i] is not None:
                continue
            dist[i] = d
            for j, cost in adj[i]:
                if dist[j] is None:
                    heapq.heappush(heap, (d + cost, j))
        out.append([Fraction(dist[t]) * step for t in snapped])
    return out


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------


def single_edge_track(s: Fraction = Fraction(1)) -> TrainTrack:
    """One edge, one dart at each end, all corner widths ``s``.

    Both ends fold the chart ``[0, 2s]`` at its midpoint; the quotient is a
    segment of length ``s``.
    """
    s = Fraction(s)
    return make_track(
        ("v", "w"),
        [("v", "w")],
        {"v": [(0, 0)], "w": [(0, 1)]},
        {(0, 0): s, (0, 1): s},
    )


def theta_track() -> TrainTrack:
    """Three parallel edges with interleaved cyclic orders and widths 4, 3, 5."""
    return make_track(
        ("v", "w"),
        [("v", "w"), ("v", "w"), ("v", "w")],
        {
            "v": [(0, 0), (1, 0), (2, 0)],
            "w": [(0, 1), (2, 1), (1, 1)],
        },
        {
            (0, 0): Fraction(1),
            (1, 0): Fraction(2),
            (2, 0): Fraction(3),
            (0, 1): Fraction(3),
            (2, 1): Fraction(2),
            (1, 1): Fraction(1),
        },
    )


def rose_track() -> TrainTrack:
    """Two loops at one vertex, order (A, B, A-bar, B-bar), widths 3 and 3."""
    return make_track(
        ("z",),
        [("z", "z"), ("z", "z")],
        {"z": [(0, 0), (1, 0), (0, 1), (1, 1)]},
        {(0, 0): Fraction(1), (1, 0): Fraction(2), (0, 1): Fraction(1), (1, 1): Fraction(2)},
    )


CORPUS = {
    "segment": lambda: single_edge_track(Fraction(2)),
    "theta": theta_track,
    "rose": rose_track,
}


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------


def track_to_json(track: TrainTrack) -> dict:
    return {
        "vertices": list(track.vertices),
        "edges": [{"ends": [v, w]} for v, w in track.edge_ends],
        "cyclic": {str(v): [list(d) for d in ring] for v, ring in track.cyclic},
        "widths": {f"{e}:{end}": format_fraction(val) for (e, end), val in track.a_plus},
    }


def track_from_json(data: dict) -> TrainTrack:
    try:
        vertices = list(data["vertices"])
        edge_ends = [tuple(entry["ends"]) for entry in data["edges"]]
        cyclic = {v: [tuple(d) for d in ring] for v, ring in data["cyclic"].items()}
        widths = {}
        for key, val in data["widths"].items():
            e, end = key.split(":")
            widths[(int(e), int(end))] = parse_fraction(val)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConstraintViolation(f"malformed train track JSON: {exc}") from exc
    return make_track(vertices, edge_ends, cyclic, widths)
