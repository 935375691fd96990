"""Piecewise-Möbius circle maps and the checks run against them.

Angles are handled in turns (fractions of a full rotation) in [0, 1) with
wraparound-aware subtraction. Arcs are half-open and counter-clockwise:
a break point belongs to the arc that starts there.
"""

from __future__ import annotations

import bisect
import csv
import heapq
import io
from dataclasses import dataclass, field
from typing import Any, Sequence

from .freegroup import FreeWord
from .moebius import (
    BoundaryPoint,
    DISK,
    Geodesic,
    MoebiusMap,
    almost_equal,
    circle_derivative,
    compose,
    from_turn,
    geodesic,
    to_unit,
    turn_of,
)

TURN_EPS = 1e-12
BREAK_SNAP = 1e-11
CONTINUITY_TOL = 1e-9
MARKOV_TOL = 1e-9
WINDING_TOL = 1e-6
PERIOD_TOL = 1e-9
PERIOD_BOUND = 12
MULTIPLIER_TOL = 1e-7
REFINE_CAP = 4
EXPANSIVITY_DEPTH = 8
EXPANSIVITY_TOL = 0.1

RIGHT = "right"
LEFT = "left"

SYMMETRIC_PARABOLIC = "symmetrically parabolic"
SYMMETRIC_HYPERBOLIC = "symmetrically hyperbolic"
ASYMMETRIC_HYPERBOLIC = "asymmetrically hyperbolic"
# Mixed type: hyperbolic on one side, parabolic on the other.
RIGHT_PARABOLIC = "right-parabolic"
LEFT_PARABOLIC = "left-parabolic"
MIXED_TYPES = (RIGHT_PARABOLIC, LEFT_PARABOLIC)
ATTRACTING = "attracting"
APERIODIC = "aperiodic"

PASS = "pass"
FAIL = "fail"
HEURISTIC_PASS = "heuristic-pass"
PROXY_PASS = "proxy-pass"
INCONCLUSIVE = "inconclusive"
_PASSING = {PASS, HEURISTIC_PASS, PROXY_PASS}


class NonMarkovError(ValueError):
    pass


class NonIntegerWindingError(ValueError):
    pass


class NotPeriodicError(ValueError):
    pass


def ccw_offset(t: float, s: float) -> float:
    """Counter-clockwise distance in turns from s to t, in [0, 1)."""
    o = (t - s) % 1.0
    return 0.0 if o >= 1.0 - TURN_EPS else o


def _point(p: BoundaryPoint | complex) -> complex:
    if isinstance(p, BoundaryPoint):
        if p.model != DISK:
            raise ValueError("circle maps act on the disk model")
        return p.value
    return to_unit(complex(p))


def _serial_turn(z: complex) -> float:
    return float(f"{turn_of(z):.15g}")


@dataclass(frozen=True)
class Arc:
    start: complex
    end: complex

    def __post_init__(self) -> None:
        s = _point(self.start)
        e = _point(self.end)
        if abs(s - e) <= TURN_EPS:
            raise ValueError("arc endpoints coincide")
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "end", e)

    @property
    def start_turn(self) -> float:
        return turn_of(self.start)

    @property
    def end_turn(self) -> float:
        return turn_of(self.end)

    @property
    def length(self) -> float:
        o = (self.end_turn - self.start_turn) % 1.0
        return o if o > 0 else 1.0

    def contains(self, z: BoundaryPoint | complex) -> bool:
        return ccw_offset(turn_of(_point(z)), self.start_turn) < self.length - TURN_EPS

    def point_at(self, fraction: float) -> complex:
        return from_turn(self.start_turn + fraction * self.length)

    def midpoint(self) -> complex:
        return self.point_at(0.5)

    def to_dict(self) -> dict[str, float]:
        return {"start": _serial_turn(self.start), "end": _serial_turn(self.end)}


@dataclass(frozen=True)
class Piece:
    arc: Arc
    map: MoebiusMap
    label: FreeWord | None = None
    name: str = ""


@dataclass(frozen=True)
class PiecewiseMap:
    pieces: tuple[Piece, ...]
    reflection_type: bool = False
    name: str = ""
    _starts: tuple[float, ...] = field(default=(), init=False, repr=False, compare=False)
    _order: tuple[int, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if len(pieces) < 2:
            raise ValueError("a piecewise map needs at least two arcs")
        total = 0.0
        for i, piece in enumerate(pieces):
            nxt = pieces[(i + 1) % len(pieces)]
            if abs(piece.arc.end - nxt.arc.start) > CONTINUITY_TOL:
                raise ValueError(f"arc {i} does not end where arc {(i + 1) % len(pieces)} starts")
            if piece.map.model != DISK or piece.map.codomain != DISK:
                raise ValueError("pieces must be disk-model maps")
            if piece.map.antiholomorphic and not self.reflection_type:
                raise ValueError("antiholomorphic piece in a map not flagged as reflection type")
            total += piece.arc.length
        if abs(total - 1.0) > 1e-9:
            raise ValueError("arcs do not partition the circle")
        ranked = sorted((piece.arc.start_turn, i) for i, piece in enumerate(pieces))
        object.__setattr__(self, "_starts", tuple(t for t, _ in ranked))
        object.__setattr__(self, "_order", tuple(i for _, i in ranked))

    @staticmethod
    def from_break_points(
        points: Sequence[complex],
        maps: Sequence[MoebiusMap],
        labels: Sequence[FreeWord | None] | None = None,
        names: Sequence[str] | None = None,
        reflection_type: bool = False,
        name: str = "",
    ) -> "PiecewiseMap":
        if len(points) != len(maps):
            raise ValueError("one map per break point is required")
        k = len(points)
        labels = list(labels) if labels is not None else [None] * k
        names = list(names) if names is not None else [f"A{i + 1}" for i in range(k)]
        pieces = tuple(
            Piece(Arc(points[i], points[(i + 1) % k]), maps[i], labels[i], names[i]) for i in range(k)
        )
        return PiecewiseMap(pieces, reflection_type=reflection_type, name=name)

    @property
    def break_points(self) -> tuple[complex, ...]:
        return tuple(piece.arc.start for piece in self.pieces)

    @property
    def arc_names(self) -> tuple[str, ...]:
        return tuple(piece.name or f"A{i + 1}" for i, piece in enumerate(self.pieces))

    def piece_index(self, z: BoundaryPoint | complex) -> int:
        t = turn_of(_point(z))
        pos = bisect.bisect_right(self._starts, t + BREAK_SNAP) - 1
        if t + BREAK_SNAP >= 1.0 and self._starts[0] <= t + BREAK_SNAP - 1.0:
            pos = 0
        return self._order[pos]

    def side_piece_index(self, z: BoundaryPoint | complex, side: str) -> int:
        index = self.piece_index(z)
        if side == LEFT:
            t = turn_of(_point(z))
            start = self.pieces[index].arc.start_turn
            if min(ccw_offset(t, start), ccw_offset(start, t)) <= BREAK_SNAP:
                return (index - 1) % len(self.pieces)
        return index

    def break_index(self, z: complex, tol: float = PERIOD_TOL) -> int | None:
        for i, b in enumerate(self.break_points):
            if abs(b - z) <= tol:
                return i
        return None

    def image_arc(self, index: int) -> tuple[complex, complex]:
        """Counter-clockwise (start, end) of the image of arc ``index``."""
        piece = self.pieces[index]
        s = to_unit(piece.map(piece.arc.start))
        e = to_unit(piece.map(piece.arc.end))
        return (e, s) if piece.map.antiholomorphic else (s, e)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "reflection": self.reflection_type,
            "breaks": [_serial_turn(p) for p in self.break_points],
            "pieces": [piece.map.to_dict() for piece in self.pieces],
            "labels": [str(piece.label) if piece.label is not None else None for piece in self.pieces],
            "arcs": list(self.arc_names),
        }

    @staticmethod
    def from_dict(data: dict[str, Any]) -> "PiecewiseMap":
        breaks = data.get("breaks")
        raw_pieces = data.get("pieces")
        if not isinstance(breaks, list) or not isinstance(raw_pieces, list):
            raise ValueError("breaks and pieces must be lists")
        labels = data.get("labels") or [None] * len(breaks)
        return PiecewiseMap.from_break_points(
            [from_turn(float(t)) for t in breaks],
            [MoebiusMap.from_dict(item) for item in raw_pieces],
            labels=[FreeWord.parse(text) if text is not None else None for text in labels],
            names=data.get("arcs"),
            reflection_type=bool(data.get("reflection", False)),
            name=str(data.get("name", "")),
        )


def as_piecewise(obj: Any) -> PiecewiseMap:
    """Accept a PiecewiseMap or anything carrying one in ``.map``."""
    if isinstance(obj, PiecewiseMap):
        return obj
    inner = getattr(obj, "map", None)
    if isinstance(inner, PiecewiseMap):
        return inner
    raise ValueError("expected a piecewise map")


def _evaluate(pm: PiecewiseMap, z: complex) -> complex:
    return to_unit(pm.pieces[pm.piece_index(z)].map(z))


def evaluate(pm: Any, p: BoundaryPoint | complex) -> BoundaryPoint | complex:
    pm = as_piecewise(pm)
    image = _evaluate(pm, _point(p))
    return BoundaryPoint(image) if isinstance(p, BoundaryPoint) else image


def iterate(pm: Any, p: BoundaryPoint | complex, n: int) -> BoundaryPoint | complex:
    pm = as_piecewise(pm)
    z = _point(p)
    for _ in range(n):
        z = _evaluate(pm, z)
    return BoundaryPoint(z) if isinstance(p, BoundaryPoint) else z


def check_continuity(pm: Any, tol: float = CONTINUITY_TOL) -> list[complex]:
    """Break points where adjacent pieces disagree; empty when continuous."""
    pm = as_piecewise(pm)
    bad: list[complex] = []
    k = len(pm.pieces)
    for i, piece in enumerate(pm.pieces):
        x = piece.arc.end
        nxt = pm.pieces[(i + 1) % k]
        if abs(piece.map(x) - nxt.map(x)) > tol:
            bad.append(x)
    return bad


def covering_degree(pm: Any) -> int:
    pm = as_piecewise(pm)
    if check_continuity(pm):
        raise ValueError("covering degree needs a continuous map")
    winding = 0.0
    for piece in pm.pieces:
        s = turn_of(to_unit(piece.map(piece.arc.start)))
        e = turn_of(to_unit(piece.map(piece.arc.end)))
        if piece.map.antiholomorphic:
            winding -= ccw_offset(s, e)
        else:
            winding += ccw_offset(e, s)
    degree = round(winding)
    if abs(winding - degree) > WINDING_TOL:
        raise NonIntegerWindingError(f"image winds {winding:.9f} times")
    return int(degree)


@dataclass(frozen=True)
class TransitionMatrix:
    entries: tuple[tuple[int, ...], ...]
    arc_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        k = len(self.entries)
        if any(len(row) != k for row in self.entries):
            raise ValueError("transition matrix must be square")
        if len(self.arc_labels) != k:
            raise ValueError("one label per arc is required")
        if any(v not in (0, 1) for row in self.entries for v in row):
            raise ValueError("transition entries must be 0 or 1")

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.entries)

    def reordered(self, labels: Sequence[str]) -> "TransitionMatrix":
        index = {label: i for i, label in enumerate(self.arc_labels)}
        if len(index) != self.size or sorted(labels) != sorted(self.arc_labels):
            raise ValueError("reordering needs a permutation of distinct arc labels")
        order = [index[label] for label in labels]
        entries = tuple(tuple(self.entries[i][j] for j in order) for i in order)
        return TransitionMatrix(entries, tuple(labels))

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["arc", *self.arc_labels])
        for label, row in zip(self.arc_labels, self.entries):
            writer.writerow([label, *row])
        return buffer.getvalue()

    def to_dict(self) -> dict[str, Any]:
        return {"arcs": list(self.arc_labels), "entries": [list(row) for row in self.entries]}


def _snap_to_break(pm: PiecewiseMap, z: complex, tol: float) -> complex | None:
    i = pm.break_index(z, tol)
    return None if i is None else pm.break_points[i]


def check_markov(pm: Any, tol: float = MARKOV_TOL) -> TransitionMatrix:
    pm = as_piecewise(pm)
    if check_continuity(pm):
        raise ValueError("Markov check needs a continuous map")
    mids = [turn_of(piece.arc.midpoint()) for piece in pm.pieces]
    rows = []
    for i in range(len(pm.pieces)):
        start, end = pm.image_arc(i)
        snapped = [_snap_to_break(pm, z, tol) for z in (start, end)]
        for raw, hit in zip((start, end), snapped):
            if hit is None:
                raise NonMarkovError(f"image endpoint {raw:.12f} of arc {pm.arc_names[i]} falls inside an arc")
        s_turn = turn_of(snapped[0])
        length = ccw_offset(turn_of(snapped[1]), s_turn) or 1.0
        rows.append(tuple(1 if ccw_offset(m, s_turn) < length else 0 for m in mids))
    return TransitionMatrix(tuple(rows), pm.arc_names)


@dataclass(frozen=True)
class RefinementNode:
    word: tuple[int, ...]
    arc: Arc
    composite: MoebiusMap
    label: FreeWord | None

    @property
    def last(self) -> int:
        return self.word[-1]


def _root_nodes(pm: PiecewiseMap) -> list[RefinementNode]:
    return [RefinementNode((i,), piece.arc, piece.map, piece.label) for i, piece in enumerate(pm.pieces)]


def _children(pm: PiecewiseMap, matrix: TransitionMatrix, node: RefinementNode) -> list[RefinementNode]:
    inverse = node.composite.inverse()
    found = []
    for j, allowed in enumerate(matrix.entries[node.last]):
        if not allowed:
            continue
        base = pm.pieces[j]
        a = to_unit(inverse(base.arc.start))
        b = to_unit(inverse(base.arc.end))
        start = b if node.composite.antiholomorphic else a
        offset = ccw_offset(turn_of(start), node.arc.start_turn)
        found.append((offset - 1.0 if offset > 1.0 - 1e-6 else offset, j, start))
    found.sort()
    children = []
    for n, (_, j, start) in enumerate(found):
        if n == 0:
            start = node.arc.start
        end = found[n + 1][2] if n + 1 < len(found) else node.arc.end
        base = pm.pieces[j]
        label = base.label * node.label if base.label is not None and node.label is not None else None
        children.append(RefinementNode(node.word + (j,), Arc(start, end), compose(base.map, node.composite), label))
    return children


def markov_refinement(pm: Any, depth: int) -> list[RefinementNode]:
    """Rank-``depth`` cylinder arcs in counter-clockwise order within each parent."""
    pm = as_piecewise(pm)
    if depth < 1:
        raise ValueError("depth must be positive")
    matrix = check_markov(pm)
    nodes = _root_nodes(pm)
    for _ in range(depth - 1):
        nodes = [child for node in nodes for child in _children(pm, matrix, node)]
    return nodes


def refine_iterate(pm: Any, n: int) -> PiecewiseMap:
    pm = as_piecewise(pm)
    if not 1 <= n <= REFINE_CAP:
        raise ValueError(f"iterate order must be between 1 and {REFINE_CAP}")
    if n == 1:
        return pm
    nodes = markov_refinement(pm, n)
    names = pm.arc_names
    pieces = tuple(
        Piece(node.arc, node.composite, node.label, ".".join(names[i] for i in node.word)) for node in nodes
    )
    return PiecewiseMap(
        pieces,
        reflection_type=any(piece.map.antiholomorphic for piece in pieces),
        name=f"{pm.name}^{n}" if pm.name else "",
    )


def minimize(pm: Any) -> PiecewiseMap:
    """Merge consecutive arcs carrying the same Möbius map."""
    pm = as_piecewise(pm)
    pieces = list(pm.pieces)
    if all(almost_equal(pieces[0].map, p.map) for p in pieces[1:]):
        return pm
    anchor = pieces[0].arc.start
    while almost_equal(pieces[0].map, pieces[-1].map):
        pieces = [pieces[-1], *pieces[:-1]]
    merged: list[Piece] = []
    for piece in pieces:
        if merged and almost_equal(merged[-1].map, piece.map):
            last = merged[-1]
            merged[-1] = Piece(Arc(last.arc.start, piece.arc.end), last.map, last.label, last.name)
        else:
            merged.append(piece)
    first = next(i for i, piece in enumerate(merged) if piece.arc.contains(anchor))
    merged = merged[first:] + merged[:first]
    return PiecewiseMap(tuple(merged), reflection_type=pm.reflection_type, name=pm.name)


def same_pieces(first: Any, second: Any, tol: float = 1e-9) -> bool:
    a = sorted(as_piecewise(first).pieces, key=lambda p: p.arc.start_turn)
    b = sorted(as_piecewise(second).pieces, key=lambda p: p.arc.start_turn)
    if len(a) != len(b):
        return False
    return all(
        abs(x.arc.start - y.arc.start) <= tol and almost_equal(x.map, y.map, tol) for x, y in zip(a, b)
    )


@dataclass(frozen=True)
class Multipliers:
    period: int
    right: float
    left: float


def _snap(pm: PiecewiseMap, z: complex) -> complex:
    hit = _snap_to_break(pm, z, PERIOD_TOL)
    return z if hit is None else hit


def periodic_cycle(pm: Any, z0: complex, side: str = RIGHT) -> list[complex]:
    """The orbit of z0 up to its first orientation-preserving return."""
    pm = as_piecewise(pm)
    z = z0
    orientation = 1
    orbit = [z0]
    for _ in range(PERIOD_BOUND):
        piece = pm.pieces[pm.side_piece_index(z, side)]
        if piece.map.antiholomorphic:
            side = LEFT if side == RIGHT else RIGHT
            orientation = -orientation
        z = _snap(pm, to_unit(piece.map(z)))
        if abs(z - z0) <= PERIOD_TOL and orientation == 1:
            return orbit
        orbit.append(z)
    raise NotPeriodicError(f"{z0} is not periodic within {PERIOD_BOUND} steps")


def _side_multiplier(pm: PiecewiseMap, z0: complex, side: str, period: int) -> float:
    z = z0
    value = 1.0
    for _ in range(period):
        piece = pm.pieces[pm.side_piece_index(z, side)]
        value *= circle_derivative(piece.map, BoundaryPoint(z))
        if piece.map.antiholomorphic:
            side = LEFT if side == RIGHT else RIGHT
        z = _snap(pm, to_unit(piece.map(z)))
    return value


def one_sided_multipliers(pm: Any, p: BoundaryPoint | complex) -> Multipliers:
    pm = as_piecewise(pm)
    z0 = _snap(pm, _point(p))
    period = len(periodic_cycle(pm, z0, RIGHT))
    return Multipliers(period, _side_multiplier(pm, z0, RIGHT, period), _side_multiplier(pm, z0, LEFT, period))


def classify_multipliers(right: float, left: float, tol: float = MULTIPLIER_TOL) -> str:
    if right < 1.0 - tol or left < 1.0 - tol:
        return ATTRACTING
    right_flat = abs(right - 1.0) <= tol
    left_flat = abs(left - 1.0) <= tol
    if right_flat and left_flat:
        return SYMMETRIC_PARABOLIC
    if right_flat:
        return RIGHT_PARABOLIC
    if left_flat:
        return LEFT_PARABOLIC
    if abs(right - left) <= tol * max(right, left):
        return SYMMETRIC_HYPERBOLIC
    return ASYMMETRIC_HYPERBOLIC


@dataclass(frozen=True)
class BreakPointEntry:
    point: complex
    period: int | None
    right: float | None
    left: float | None
    classification: str


@dataclass(frozen=True)
class BreakPointReport:
    entries: tuple[BreakPointEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.classification != ASYMMETRIC_HYPERBOLIC for e in self.entries)

    @property
    def mixed(self) -> tuple[BreakPointEntry, ...]:
        return tuple(e for e in self.entries if e.classification in MIXED_TYPES)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["turn", "period", "right", "left", "classification"])
        for e in self.entries:
            writer.writerow([
                _serial_turn(e.point),
                "" if e.period is None else e.period,
                "" if e.right is None else f"{e.right:.12g}",
                "" if e.left is None else f"{e.left:.12g}",
                e.classification,
            ])
        return buffer.getvalue()


def classify_break_points(pm: Any) -> BreakPointReport:
    pm = as_piecewise(pm)
    entries = []
    for x in pm.break_points:
        try:
            m = one_sided_multipliers(pm, x)
        except NotPeriodicError:
            entries.append(BreakPointEntry(x, None, None, None, APERIODIC))
            continue
        entries.append(BreakPointEntry(x, m.period, m.right, m.left, classify_multipliers(m.right, m.left)))
    return BreakPointReport(tuple(entries))


@dataclass(frozen=True)
class ExpansivityProxy:
    diameters: tuple[float, ...]
    tol: float

    @property
    def passed(self) -> bool:
        d = self.diameters
        decreasing = all(b < a for a, b in zip(d, d[1:]))
        return decreasing and d[-1] < self.tol


def _max_diameter(pm: PiecewiseMap, matrix: TransitionMatrix, depth: int) -> float:
    # Children are nested in their parent, so the first node of full depth
    # popped from the max-heap is the largest one.
    heap = [(-node.arc.length, n, node) for n, node in enumerate(_root_nodes(pm))]
    heapq.heapify(heap)
    counter = len(heap)
    while heap:
        neg, _, node = heapq.heappop(heap)
        if len(node.word) == depth:
            return -neg
        for child in _children(pm, matrix, node):
            counter += 1
            heapq.heappush(heap, (-child.arc.length, counter, child))
    raise ValueError("refinement is empty")


def expansivity_proxy(pm: Any, depth: int = EXPANSIVITY_DEPTH, tol: float = EXPANSIVITY_TOL) -> ExpansivityProxy:
    """Largest rank-n arc length (turns) for n = 1..depth."""
    pm = as_piecewise(pm)
    matrix = check_markov(pm)
    return ExpansivityProxy(tuple(_max_diameter(pm, matrix, n) for n in range(1, depth + 1)), tol)


@dataclass(frozen=True)
class IdealPolygon:
    vertices: tuple[complex, ...]

    def __post_init__(self) -> None:
        vertices = tuple(to_unit(complex(v)) for v in self.vertices)
        if len(vertices) < 2:
            raise ValueError("an ideal polygon needs at least two vertices")
        turns = [turn_of(v) for v in vertices]
        total = 0.0
        for i, t in enumerate(turns):
            step = ccw_offset(turns[(i + 1) % len(turns)], t)
            if step <= TURN_EPS:
                raise ValueError("vertices must be distinct and counter-clockwise")
            total += step
        if abs(total - 1.0) > 1e-9:
            raise ValueError("vertices are not in counter-clockwise order")
        object.__setattr__(self, "vertices", vertices)

    def edges(self) -> list[Geodesic]:
        k = len(self.vertices)
        return [geodesic(self.vertices[i], self.vertices[(i + 1) % k]) for i in range(k)]


@dataclass(frozen=True)
class FundamentalDomain:
    polygon: IdealPolygon
    components: tuple[tuple[Arc, Geodesic], ...]


def fundamental_domain(pm: Any) -> FundamentalDomain:
    pm = as_piecewise(pm)
    polygon = IdealPolygon(pm.break_points)
    return FundamentalDomain(polygon, tuple((p.arc, e) for p, e in zip(pm.pieces, polygon.edges())))


@dataclass(frozen=True)
class ReportItem:
    number: int
    name: str
    status: str
    detail: str = ""


@dataclass(frozen=True)
class MateabilityReport:
    subject: str
    items: tuple[ReportItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.status in _PASSING for item in self.items)

    def item(self, number: int) -> ReportItem:
        return next(item for item in self.items if item.number == number)

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "items": [
                {"number": i.number, "name": i.name, "status": i.status, "detail": i.detail} for i in self.items
            ],
        }

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["item", "name", "status", "detail"])
        for i in self.items:
            writer.writerow([i.number, i.name, i.status, i.detail])
        return buffer.getvalue()


def _orbit_item(obj: Any, oe_depth: int, samples: int, seed: int) -> ReportItem:
    name = "orbit equivalent to the group"
    if getattr(obj, "presentation", None) is None:
        return ReportItem(1, name, INCONCLUSIVE, "no group presentation attached")
    from .symbolic import orbit_equivalence_heuristic

    verdict = orbit_equivalence_heuristic(obj, depth=oe_depth, samples=samples, seed=seed)
    return ReportItem(1, name, verdict.status, verdict.detail)


def mateability_report(
    pm: Any,
    oe_depth: int = 3,
    expansivity_depth: int = EXPANSIVITY_DEPTH,
    samples: int = 100,
    seed: int = 2024,
) -> MateabilityReport:
    plain = as_piecewise(pm)
    items = [_orbit_item(pm, oe_depth, samples, seed)]

    gaps = check_continuity(plain)
    if gaps:
        detail = "discontinuous at turns " + ", ".join(f"{turn_of(z):.9f}" for z in gaps)
        items.append(ReportItem(2, "continuous piecewise Möbius", FAIL, detail))
    elif any(piece.map.antiholomorphic for piece in plain.pieces):
        items.append(ReportItem(2, "continuous piecewise Möbius", FAIL, "antiholomorphic pieces"))
    else:
        items.append(ReportItem(2, "continuous piecewise Möbius", PASS, f"{len(plain.pieces)} pieces"))

    markov: TransitionMatrix | None = None
    markov_error = ""
    if not gaps:
        try:
            markov = check_markov(plain)
        except NonMarkovError as exc:
            markov_error = str(exc)

    name = "expansive covering of degree > 1"
    if gaps:
        items.append(ReportItem(3, name, FAIL, "not continuous"))
    else:
        degree = covering_degree(plain)
        if abs(degree) <= 1:
            items.append(ReportItem(3, name, FAIL, f"degree {degree}"))
        elif markov is None:
            items.append(ReportItem(3, name, INCONCLUSIVE, f"degree {degree}; no Markov refinement"))
        else:
            proxy = expansivity_proxy(plain, expansivity_depth)
            detail = f"degree {degree}; rank-{expansivity_depth} diameter {proxy.diameters[-1]:.6f} turns"
            items.append(ReportItem(3, name, PROXY_PASS if proxy.passed else FAIL, detail))

    if markov is not None:
        items.append(ReportItem(4, "Markov partition", PASS, f"row sums {list(markov.row_sums)}"))
    else:
        items.append(ReportItem(4, "Markov partition", FAIL, markov_error or "not continuous"))

    report = classify_break_points(plain)
    bad = [e for e in report.entries if e.classification == ASYMMETRIC_HYPERBOLIC]
    if bad:
        detail = "asymmetric at turns " + ", ".join(f"{turn_of(e.point):.9f}" for e in bad)
        items.append(ReportItem(5, "no asymmetrically hyperbolic break point", FAIL, detail))
    else:
        periodic = sum(1 for e in report.entries if e.period is not None)
        items.append(ReportItem(5, "no asymmetrically hyperbolic break point", PASS, f"{periodic} periodic break points"))

    return MateabilityReport(plain.name or "map", tuple(items))
