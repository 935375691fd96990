"""The conjugacy φ between z^deg and a Markov circle map, and the question-mark function.

φ is evaluated lazily: the base-deg digits of a turn select inverse branches
of the circle map, and the nested arc they cut out is returned together with
its length as an error bar.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .catalog import bowen_series
from .circle_maps import PiecewiseMap, as_piecewise, ccw_offset, check_continuity, covering_degree
from .moebius import MoebiusMap, cayley_transform, from_turn, to_unit, turn_of

DEFAULT_PHI_DEPTH = 30
RANK_ARC_LIMIT = 100_000
QMARK_DEPTH = 64
ANCHOR_TOL = 1e-12
BRANCH_SLACK = 1e-12


@dataclass(frozen=True)
class PhiValue:
    point: complex
    error: float

    @property
    def turn(self) -> float:
        return turn_of(self.point)


@dataclass(frozen=True)
class RankArc:
    """An arc of the refinement by A^{-rank}(1); may be far narrower than a generic Arc allows."""

    index: int
    rank: int
    start: complex
    end: complex

    @property
    def length(self) -> float:
        return ccw_offset(turn_of(self.end), turn_of(self.start))

    def midpoint(self) -> complex:
        return from_turn(turn_of(self.start) + self.length / 2)


def _within(z: complex, start: complex, length: float, slack: float = BRANCH_SLACK) -> bool:
    o = ccw_offset(turn_of(z), turn_of(start))
    return o <= length + slack or o >= 1.0 - slack


def _as_fraction(value: float | int | Fraction | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


class CircleHomeo:
    """φ with φ(1) = 1 and A∘φ = φ∘z^deg."""

    def __init__(self, obj: Any, depth: int = DEFAULT_PHI_DEPTH) -> None:
        pm = as_piecewise(obj)
        if check_continuity(pm):
            raise ValueError("conjugacy needs a continuous map")
        if any(piece.map.antiholomorphic for piece in pm.pieces):
            raise ValueError("conjugacy to z^deg needs an orientation-preserving map")
        degree = covering_degree(pm)
        if degree < 2:
            raise ValueError(f"covering degree {degree} is not expanding")
        piece = pm.pieces[pm.piece_index(1)]
        if abs(to_unit(piece.map(1)) - 1) > 1e-9:
            raise ValueError("the anchor 1 is not fixed by the map")
        if depth < 1:
            raise ValueError("depth must be positive")
        self.map: PiecewiseMap = pm
        self.degree = degree
        self.depth = depth
        self._inverses: list[MoebiusMap] = [p.map.inverse() for p in pm.pieces]
        self.preimages = self._preimages_of_anchor()

    def _preimages_of_anchor(self) -> list[complex]:
        found: list[complex] = [complex(1, 0)]
        for piece, inverse in zip(self.map.pieces, self._inverses):
            z = to_unit(inverse(1))
            if piece.arc.contains(z) and all(abs(z - w) > 1e-9 for w in found):
                found.append(z)
        found.sort(key=lambda z: ccw_offset(turn_of(z), 0.0))
        if len(found) != self.degree:
            raise ValueError(f"found {len(found)} preimages of the anchor for degree {self.degree}")
        return found

    def _branch(self, j: int) -> tuple[complex, float]:
        start = self.preimages[j]
        end = self.preimages[(j + 1) % self.degree]
        return start, ccw_offset(turn_of(end), turn_of(start)) or 1.0

    def inverse_branch(self, j: int, w: complex) -> complex:
        """The point of branch arc j sent to w; the anchor pulls back to the branch start."""
        start, length = self._branch(j)
        if abs(w - 1) <= ANCHOR_TOL:
            return start
        for piece, inverse in zip(self.map.pieces, self._inverses):
            z = to_unit(inverse(w))
            if _within(z, piece.arc.start, piece.arc.length) and _within(z, start, length):
                return z
        raise ValueError(f"no preimage of turn {turn_of(w):.12f} in branch {j}")

    def digits(self, theta: float | Fraction, depth: int) -> list[int]:
        x = _as_fraction(theta) % 1
        out = []
        for _ in range(depth):
            x *= self.degree
            digit = int(x)
            out.append(digit)
            x -= digit
        return out

    def _start_point(self, digits: Sequence[int]) -> complex:
        w = complex(1, 0)
        for d in reversed(digits):
            w = self.inverse_branch(d, w)
        return w

    def _index_digits(self, k: int, depth: int) -> list[int]:
        out = []
        for _ in range(depth):
            k, r = divmod(k, self.degree)
            out.append(r)
        return out[::-1]

    def rank_arc(self, k: int, depth: int) -> RankArc:
        """The k-th arc (counter-clockwise from 1) cut out by A^{-depth}(1)."""
        total = self.degree**depth
        if not 0 <= k < total:
            raise ValueError("arc index out of range")
        start = self._start_point(self._index_digits(k, depth))
        end = complex(1, 0) if k + 1 == total else self._start_point(self._index_digits(k + 1, depth))
        return RankArc(k, depth, start, end)

    def evaluate(self, theta: float | Fraction, depth: int | None = None) -> PhiValue:
        depth = depth or self.depth
        if _as_fraction(theta) % 1 == 0:
            return PhiValue(complex(1, 0), 0.0)
        digits = self.digits(theta, depth)
        k = 0
        for d in digits:
            k = k * self.degree + d
        arc = self.rank_arc(k, depth)
        return PhiValue(arc.midpoint(), arc.length)

    def __call__(self, theta: float | Fraction) -> complex:
        return self.evaluate(theta).point

    def inverse(self, point: complex, depth: int | None = None) -> Fraction:
        """φ^{-1}: the itinerary of ``point`` through the branch arcs as base-deg digits."""
        depth = depth or self.depth
        z = to_unit(complex(point))
        value = Fraction(0)
        scale = Fraction(1)
        for _ in range(depth):
            offset = ccw_offset(turn_of(z), 0.0)
            j = max(i for i, p in enumerate(self.preimages) if ccw_offset(turn_of(p), 0.0) <= offset + 1e-15)
            scale /= self.degree
            value += j * scale
            piece = self.map.pieces[self.map.piece_index(z)]
            z = to_unit(piece.map(z))
        return value


def build_phi(lm: Any, depth: int = DEFAULT_PHI_DEPTH) -> CircleHomeo:
    return CircleHomeo(lm, depth)


def rank_arcs(lm: Any, n: int) -> list[RankArc]:
    """Arcs between consecutive points of A^{-n}(1), counter-clockwise from 1."""
    phi = lm if isinstance(lm, CircleHomeo) else CircleHomeo(lm, max(n, 1))
    if n < 1:
        raise ValueError("rank must be positive")
    if phi.degree**n > RANK_ARC_LIMIT:
        raise ValueError(f"rank {n} produces more than {RANK_ARC_LIMIT} arcs")
    return [phi.rank_arc(k, n) for k in range(phi.degree**n)]


def mme_arc_mass(lm: Any, arc: Any, n: int) -> Fraction:
    """Maximal-entropy mass of a rank-n arc: deg^{-n}; ``None`` with n = 0 is the full circle."""
    if n == 0 and arc is None:
        return Fraction(1)
    phi = lm if isinstance(lm, CircleHomeo) else CircleHomeo(lm, max(n, 1))
    for candidate in rank_arcs(phi, n):
        if abs(candidate.start - arc.start) <= 1e-9 and abs(candidate.end - arc.end) <= 1e-9:
            return Fraction(1, phi.degree**n)
    raise ValueError(f"arc is not a rank-{n} arc")


def minkowski_q(x: float | Fraction | str, depth: int = QMARK_DEPTH) -> Fraction:
    """?(x) by a Stern-Brocot walk; exact for rationals reached within ``depth`` steps."""
    x = _as_fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    if x in (0, 1):
        return x
    lo, hi = (0, 1), (1, 1)
    y_lo, y_hi = Fraction(0), Fraction(1)
    for _ in range(depth):
        med = Fraction(lo[0] + hi[0], lo[1] + hi[1])
        y_med = (y_lo + y_hi) / 2
        if x == med:
            return y_med
        if x < med:
            hi, y_hi = (med.numerator, med.denominator), y_med
        else:
            lo, y_lo = (med.numerator, med.denominator), y_med
    raise ValueError(f"Stern-Brocot depth {depth} exhausted before reaching {x}")


def minkowski_q_inverse(y: float | Fraction | str, depth: int = QMARK_DEPTH) -> Fraction:
    """?^{-1}(y): exact on dyadic rationals, the depth-th mediant otherwise."""
    y = _as_fraction(y)
    if not 0 <= y <= 1:
        raise ValueError("y must lie in [0, 1]")
    if y in (0, 1):
        return y
    lo, hi = (0, 1), (1, 1)
    y_lo, y_hi = Fraction(0), Fraction(1)
    med = Fraction(1, 2)
    for _ in range(depth):
        med = Fraction(lo[0] + hi[0], lo[1] + hi[1])
        y_med = (y_lo + y_hi) / 2
        if y == y_med:
            return med
        if y < y_med:
            hi, y_hi = (med.numerator, med.denominator), y_med
        else:
            lo, y_lo = (med.numerator, med.denominator), y_med
    return med


def is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class HValue:
    value: float
    lower: float
    upper: float

    @property
    def error(self) -> float:
        return self.upper - self.lower


def _half_plane_real(m: MoebiusMap, z: complex) -> float:
    a, b, c, d = m.matrix
    denom = c * z + d
    if abs(denom) < 1e-15:
        return float("inf")
    return ((a * z + b) / denom).real


class HMap:
    """H = M∘φ∘E on [0, 1], with E(x) = exp(2πi x/4) and M the Cayley transform."""

    def __init__(self, phi: CircleHomeo) -> None:
        self.phi = phi
        self.cayley = cayley_transform()

    def evaluate(self, x: float | Fraction, depth: int | None = None) -> HValue:
        x = _as_fraction(x)
        if not 0 <= x <= 1:
            raise ValueError("x must lie in [0, 1]")
        if x == 0:
            return HValue(0.0, 0.0, 0.0)
        if x == 1:
            return HValue(1.0, 1.0, 1.0)
        depth = depth or self.phi.depth
        theta = x / 4
        digits = self.phi.digits(theta, depth)
        k = 0
        for d in digits:
            k = k * self.phi.degree + d
        arc = self.phi.rank_arc(k, depth)
        ends = sorted(_half_plane_real(self.cayley, z) for z in (arc.start, arc.end))
        return HValue(_half_plane_real(self.cayley, arc.midpoint()), ends[0], ends[1])

    def __call__(self, x: float | Fraction) -> float:
        return self.evaluate(x).value


def h_map(x: float | Fraction, depth: int = DEFAULT_PHI_DEPTH, phi: CircleHomeo | None = None) -> HValue:
    if phi is None:
        phi = build_phi(bowen_series(2), depth)
    return HMap(phi).evaluate(x, depth)

