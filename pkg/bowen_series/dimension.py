"""Exact interval maps, rank-n vertices and Hausdorff dimension of maximal-entropy measures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .conjugacy import minkowski_q
from .moebius import INFINITY, Infinity

MIN_TARGET_WIDTH = 2e-3
DEFAULT_TARGET_WIDTH = 0.01
MONTE_CARLO_SAMPLES = 50_000
QMARK_FLOAT_STEPS = 60
LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class FlPiece:
    """t ↦ (a t + b)/(c t + d) on [lo, hi); ``None`` bounds stand for ∓∞."""

    a: int
    b: int
    c: int
    d: int
    lo: Fraction | None
    hi: Fraction | None
    wrap: bool = False

    def __post_init__(self) -> None:
        if self.det == 0:
            raise ValueError("degenerate piece: ad - bc = 0")

    def has_pole_inside(self) -> bool:
        if self.c == 0:
            return False
        pole = Fraction(-self.d, self.c)
        return (self.lo is None or pole > self.lo) and (self.hi is None or pole < self.hi)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def orientation(self) -> int:
        return 1 if self.det > 0 else -1

    def raw(self, x: Fraction) -> Fraction:
        return Fraction(self.a * x + self.b) / (self.c * x + self.d)

    def __call__(self, x: Fraction) -> Fraction:
        value = self.raw(x)
        return value - math.floor(value) if self.wrap else value

    def derivative(self, x: Fraction) -> Fraction:
        return Fraction(abs(self.det)) / (self.c * x + self.d) ** 2

    def log_derivative(self, x: Fraction | float) -> float:
        return math.log(abs(self.det)) - 2 * math.log(abs(float(self.c * x + self.d)))

    def contains(self, x: Fraction) -> bool:
        return (self.lo is None or self.lo <= x) and (self.hi is None or x < self.hi)

    def preimages(self, y: Fraction) -> list[Fraction]:
        targets = [y, y + 1] if self.wrap else [y]
        found = []
        for t in targets:
            denom = self.a - self.c * t
            if denom == 0:
                continue
            x = Fraction(self.d * t - self.b) / denom
            if self.contains(x) and self(x) == y:
                found.append(x)
        return found


@dataclass(frozen=True)
class IntervalMarkovMap:
    name: str
    pieces: tuple[FlPiece, ...]
    rank_cap: int = 12

    def __post_init__(self) -> None:
        pieces = tuple(self.pieces)
        if not pieces or pieces[0].lo != 0 or pieces[-1].hi != 1:
            raise ValueError("pieces must partition [0, 1)")
        for left, right in zip(pieces, pieces[1:]):
            if left.hi != right.lo:
                raise ValueError("pieces must be contiguous")
        for piece in pieces:
            if piece.has_pole_inside():
                raise ValueError(f"piece on [{piece.lo}, {piece.hi}) is not monotone")
            if {piece.raw(piece.lo), piece.raw(piece.hi)} != {Fraction(0), Fraction(1)}:
                raise ValueError(f"piece on [{piece.lo}, {piece.hi}) is not a full branch")
        object.__setattr__(self, "pieces", pieces)

    @property
    def branches(self) -> int:
        return len(self.pieces)

    @property
    def entropy(self) -> float:
        return math.log(self.branches)

    @property
    def break_points(self) -> tuple[Fraction, ...]:
        return tuple(p.lo for p in self.pieces[1:])

    def piece_at(self, x: Fraction, side: str = RIGHT) -> FlPiece:
        if not 0 <= x <= 1:
            raise ValueError("x must lie in [0, 1]")
        if side == LEFT:
            if x == 0:
                raise ValueError("0 has no left neighbourhood")
            return next(p for p in self.pieces if p.lo < x <= p.hi)
        if x == 1:
            return self.pieces[-1]
        return next(p for p in self.pieces if p.contains(x))

    def __call__(self, x: Fraction | str | int) -> Fraction:
        x = Fraction(x)
        return self.piece_at(x)(x)


def _piece(a: int, b: int, c: int, d: int, lo: Fraction | int, hi: Fraction | int) -> FlPiece:
    lo, hi = Fraction(lo), Fraction(hi)
    trial = FlPiece(a, b, c, d, lo, hi)
    return FlPiece(a, b, c, d, lo, hi, wrap=trial.raw(lo) == 1)


def f_bs() -> IntervalMarkovMap:
    return IntervalMarkovMap(
        "bs3",
        (
            _piece(1, 0, -2, 1, 0, Fraction(1, 3)),
            _piece(3, -1, -1, 1, Fraction(1, 3), Fraction(1, 2)),
            _piece(2, -1, 1, 0, Fraction(1, 2), 1),
        ),
        rank_cap=12,
    )


def f_hbs() -> IntervalMarkovMap:
    return IntervalMarkovMap(
        "hbs3",
        (
            _piece(2, -1, 1, -1, 0, Fraction(1, 2)),
            _piece(-1, 1, 1, 0, Fraction(1, 2), 1),
        ),
        rank_cap=16,
    )


def times_three() -> IntervalMarkovMap:
    return IntervalMarkovMap(
        "x3",
        tuple(_piece(3, -k, 0, 1, Fraction(k, 3), Fraction(k + 1, 3)) for k in range(3)),
        rank_cap=12,
    )


def times_minus_two() -> IntervalMarkovMap:
    return IntervalMarkovMap(
        "x-2",
        (_piece(-2, 1, 0, 1, 0, Fraction(1, 2)), _piece(-2, 2, 0, 1, Fraction(1, 2), 1)),
        rank_cap=16,
    )


VARIANTS = {"bs3": f_bs, "hbs3": f_hbs}


def interval_map(variant: str) -> IntervalMarkovMap:
    try:
        return VARIANTS[variant]()
    except KeyError:
        raise ValueError(f"unknown variant: {variant} (expected bs3 or hbs3)") from None


def tau_map() -> tuple[FlPiece, ...]:
    """The Bowen-Series map of G_2 seen on the real line through the Cayley transform."""
    return (
        FlPiece(1, 2, 0, 1, None, Fraction(-1)),
        FlPiece(1, 0, 2, 1, Fraction(-1), Fraction(0)),
        FlPiece(1, 0, -2, 1, Fraction(0), Fraction(1)),
        FlPiece(1, -2, 0, 1, Fraction(1), None),
    )


def tau(t: float | Fraction | Infinity) -> float | Fraction | Infinity:
    if t is INFINITY or (isinstance(t, float) and math.isinf(t)):
        return INFINITY
    pieces = tau_map()
    piece = next(p for p in pieces if (p.lo is None or p.lo <= t) and (p.hi is None or t < p.hi))
    value = piece.a * t + piece.b
    denom = piece.c * t + piece.d
    if denom == 0:
        return INFINITY
    return value / denom


def _levels(imap: IntervalMarkovMap) -> Iterator[set[Fraction]]:
    level = {Fraction(0)}
    while True:
        level = {x for y in level for piece in imap.pieces for x in piece.preimages(y)}
        yield level


def vertex_set(imap: IntervalMarkovMap, rank: int) -> list[Fraction]:
    """Solutions of F^rank(x) = 0 in [0, 1), plus 1, sorted."""
    if not 0 <= rank <= imap.rank_cap:
        raise ValueError(f"rank must be between 0 and {imap.rank_cap}")
    level = {Fraction(0)}
    levels = _levels(imap)
    for _ in range(rank):
        level = next(levels)
    return sorted(level | {Fraction(1)})


def log_deriv(imap: IntervalMarkovMap, x: Fraction | str | int, side: str = RIGHT) -> float:
    x = Fraction(x)
    return imap.piece_at(x, side).log_derivative(x)


@dataclass(frozen=True)
class LyapunovBracket:
    rank: int
    lower: float
    upper: float
    entropy: float

    @property
    def hd_lower(self) -> float:
        return self.entropy / self.upper

    @property
    def hd_upper(self) -> float:
        return self.entropy / self.lower if self.lower > 0 else math.inf

    @property
    def hd_width(self) -> float:
        return self.hd_upper - self.hd_lower

    def to_dict(self) -> dict[str, float]:
        return {
            "rank": self.rank,
            "lyapunov_lower": self.lower,
            "lyapunov_upper": self.upper,
            "lower": self.hd_lower,
            "upper": self.hd_upper,
        }


def _bracket(imap: IntervalMarkovMap, vertices: Sequence[Fraction], rank: int) -> LyapunovBracket:
    mass = 1.0 / imap.branches**rank
    lows, highs = [], []
    for u, v in zip(vertices, vertices[1:]):
        piece = imap.piece_at(u)
        ends = (piece.log_derivative(u), piece.log_derivative(v))
        lows.append(min(ends) * mass)
        highs.append(max(ends) * mass)
    return LyapunovBracket(rank, math.fsum(lows), math.fsum(highs), imap.entropy)


def lyapunov_bracket(imap: IntervalMarkovMap, rank: int) -> LyapunovBracket:
    """Riemann bounds for ∫ ln|F'| against the maximal-entropy measure on rank-n cells."""
    if rank < 1:
        raise ValueError("rank must be positive")
    return _bracket(imap, vertex_set(imap, rank), rank)


@dataclass(frozen=True)
class HausdorffEstimate:
    variant: str
    bracket: LyapunovBracket
    target_width: float
    reached: bool

    @property
    def lower(self) -> float:
        return self.bracket.hd_lower

    @property
    def upper(self) -> float:
        return self.bracket.hd_upper

    @property
    def rank(self) -> int:
        return self.bracket.rank

    def to_dict(self) -> dict[str, object]:
        return {
            "variant": self.variant,
            "lower": self.lower,
            "upper": self.upper,
            "rank": self.rank,
            "target_width": self.target_width,
            "reached": self.reached,
        }


def hausdorff_mme(variant: str | IntervalMarkovMap, target_width: float = DEFAULT_TARGET_WIDTH) -> HausdorffEstimate:
    """Raise the rank until the dimension bracket is narrower than ``target_width``."""
    if target_width < MIN_TARGET_WIDTH:
        raise ValueError(f"target width must be at least {MIN_TARGET_WIDTH}")
    imap = variant if isinstance(variant, IntervalMarkovMap) else interval_map(variant)
    levels = _levels(imap)
    bracket = None
    for rank in range(1, imap.rank_cap + 1):
        vertices = sorted(next(levels) | {Fraction(1)})
        bracket = _bracket(imap, vertices, rank)
        if bracket.hd_width <= target_width:
            return HausdorffEstimate(imap.name, bracket, target_width, True)
    return HausdorffEstimate(imap.name, bracket, target_width, False)


def question_mark_conjugacy_check(rank: int) -> bool:
    """? sends the rank-n vertices of f_hbs onto k/2^n and conjugates f_hbs to x -> -2x mod 1."""
    imap = f_hbs()
    doubling = times_minus_two()
    vertices = vertex_set(imap, rank)
    images = [minkowski_q(v, depth=rank + 2) for v in vertices]
    if images != [Fraction(k, 2**rank) for k in range(2**rank + 1)]:
        return False
    return all(minkowski_q(imap(v), depth=rank + 2) == doubling(q) for v, q in zip(vertices, images))


def _qmark_inverse_float(y: float, steps: int = QMARK_FLOAT_STEPS) -> float:
    p_lo, q_lo, p_hi, q_hi = 0, 1, 1, 1
    y_lo, y_hi = 0.0, 1.0
    for _ in range(steps):
        p, q = p_lo + p_hi, q_lo + q_hi
        mid = (y_lo + y_hi) / 2
        if y == mid:
            return p / q
        if y < mid:
            p_hi, q_hi, y_hi = p, q, mid
        else:
            p_lo, q_lo, y_lo = p, q, mid
    return (p_lo + p_hi) / (q_lo + q_hi)


def birkhoff_hausdorff_estimate(samples: int = MONTE_CARLO_SAMPLES, seed: int = 2024) -> float:
    """Monte-Carlo HD of the f_hbs maximal-entropy measure, sampled as ?^{-1} of uniform numbers."""
    imap = f_hbs()
    rng = np.random.default_rng(seed)
    xs = np.array([_qmark_inverse_float(float(y)) for y in rng.random(samples)])
    half = 0.5
    # |F'| is 1/(1-x)^2 left of 1/2 and 1/x^2 right of it
    logs = np.where(xs < half, -2.0 * np.log1p(-xs), -2.0 * np.log(xs))
    return imap.entropy / float(np.mean(logs))
