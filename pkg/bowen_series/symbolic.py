"""Subshifts of finite type, Parry measures, coding and grand-orbit search."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import networkx as nx
import numpy as np

from .circle_maps import (
    FAIL,
    HEURISTIC_PASS,
    INCONCLUSIVE,
    Arc,
    NotPeriodicError,
    PiecewiseMap,
    RefinementNode,
    TransitionMatrix,
    as_piecewise,
    check_markov,
    periodic_cycle,
)
from .freegroup import IDENTITY_WORD, FreeWord
from .moebius import BoundaryPoint, compose, from_turn, to_unit, turn_of

PERRON_TOL = 1e-13
PERRON_MAX_ITER = 100_000
STOCHASTIC_TOL = 1e-12
STATIONARY_TOL = 1e-10
POINT_TOL = 1e-9
ITINERARY_CAP = 20_000
GRAND_ORBIT_CAP = 5
WITNESS_TOL = 1e-8
CYCLE_TOL = 1e-9
DEFAULT_OE_DEPTH = 3


class ConvergenceError(ValueError):
    pass


@dataclass(frozen=True)
class Sft:
    """One-sided subshift of finite type on symbols 0..k-1."""

    matrix: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.matrix)
        k = len(rows)
        if k == 0 or any(len(row) != k for row in rows):
            raise ValueError("transition matrix must be square and nonempty")
        if any(v not in (0, 1) for row in rows for v in row):
            raise ValueError("transition entries must be 0 or 1")
        labels = tuple(self.labels) or tuple(str(i) for i in range(k))
        if len(labels) != k:
            raise ValueError("one label per symbol is required")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "labels", labels)

    @staticmethod
    def from_transition_matrix(tm: TransitionMatrix) -> "Sft":
        return Sft(tm.entries, tm.arc_labels)

    @property
    def size(self) -> int:
        return len(self.matrix)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)

    def is_irreducible(self) -> bool:
        return nx.is_strongly_connected(transition_graph(self))

    def admissible(self, word: Sequence[int]) -> bool:
        if any(not 0 <= s < self.size for s in word):
            return False
        return all(self.matrix[a][b] for a, b in zip(word, word[1:]))


def full_shift(m: int) -> Sft:
    return Sft(tuple(tuple(1 for _ in range(m)) for _ in range(m)))


def transition_graph(sft: Sft) -> nx.DiGraph:
    graph = nx.DiGraph()
    for i, label in enumerate(sft.labels):
        graph.add_node(i, label=label)
    for i, row in enumerate(sft.matrix):
        for j, v in enumerate(row):
            if v:
                graph.add_edge(i, j)
    return graph


def sft_of(obj: Any) -> Sft:
    """The subshift coding a Markov circle map."""
    return Sft.from_transition_matrix(check_markov(as_piecewise(obj)))


@dataclass(frozen=True)
class Cylinder:
    word: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "word", tuple(int(s) for s in self.word))

    @property
    def rank(self) -> int:
        return len(self.word)

    @staticmethod
    def parse(text: str) -> "Cylinder":
        """Read a comma-separated list of 1-based symbols."""
        try:
            return Cylinder(tuple(int(part) - 1 for part in text.split(",") if part.strip()))
        except ValueError:
            raise ValueError(f"Invalid cylinder word: {text}") from None


def admissible_words(sft: Sft, n: int) -> list[tuple[int, ...]]:
    """All admissible words of length n in lexicographic order."""
    if n < 1:
        raise ValueError("word length must be positive")
    words = [(s,) for s in range(sft.size)]
    for _ in range(n - 1):
        words = [w + (j,) for w in words for j in range(sft.size) if sft.matrix[w[-1]][j]]
    return words


def count_admissible(sft: Sft, n: int) -> int:
    if n < 1:
        raise ValueError("word length must be positive")
    ones = np.ones(sft.size, dtype=object)
    m = np.array(sft.matrix, dtype=object)
    vector = ones
    for _ in range(n - 1):
        vector = m.dot(vector)
    return int(sum(vector))


@dataclass(frozen=True)
class PerronData:
    eigenvalue: float
    right: tuple[float, ...]
    left: tuple[float, ...]


def _power_vector(m: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    # Shifting by the identity keeps the Perron vector and makes the
    # iteration converge for periodic irreducible matrices too.
    shifted = m + np.eye(m.shape[0])
    v = np.full(m.shape[0], 1.0 / m.shape[0])
    for _ in range(max_iter):
        w = shifted @ v
        w = w / w.sum()
        if np.max(np.abs(w - v)) <= tol * np.max(np.abs(w)):
            return w
        v = w
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


def perron(matrix: Sequence[Sequence[float]], tol: float = PERRON_TOL, max_iter: int = PERRON_MAX_ITER) -> PerronData:
    m = np.array(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError("matrix must be square and nonempty")
    if np.any(m < 0):
        raise ValueError("matrix must be nonnegative")
    right = _power_vector(m, tol, max_iter)
    left = _power_vector(m.T, tol, max_iter)
    if np.any(right <= 0) or np.any(left <= 0):
        raise ConvergenceError("Perron vector is not positive; matrix is reducible")
    eigenvalue = float((m @ right).sum())
    return PerronData(eigenvalue, tuple(float(x) for x in right), tuple(float(x) for x in left))


def entropy(sft: Sft) -> float:
    return math.log(perron(sft.matrix).eigenvalue)


@dataclass(frozen=True)
class MarkovMeasure:
    stationary: tuple[float, ...]
    transitions: tuple[tuple[float, ...], ...]
    exact_stationary: tuple[Fraction, ...] | None = None
    exact_transitions: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self) -> None:
        p = np.array(self.transitions, dtype=float)
        pi = np.array(self.stationary, dtype=float)
        if np.max(np.abs(p.sum(axis=1) - 1.0)) > STOCHASTIC_TOL:
            raise ValueError("transition rows must sum to 1")
        if np.max(np.abs(pi @ p - pi)) > STATIONARY_TOL:
            raise ValueError("stationary vector is not invariant")

    @property
    def exact(self) -> bool:
        return self.exact_stationary is not None and self.exact_transitions is not None


def parry_measure(sft: Sft) -> MarkovMeasure:
    data = perron(sft.matrix)
    lam = data.eigenvalue
    r = np.array(data.right)
    l = np.array(data.left)
    a = np.array(sft.matrix, dtype=float)
    transitions = a * r[None, :] / (lam * r[:, None])
    transitions = transitions / transitions.sum(axis=1, keepdims=True)
    stationary = l * r / float(l @ r)

    exact_pi = exact_p = None
    rows = {sum(row) for row in sft.matrix}
    if len(rows) == 1:
        degree = rows.pop()
        exact_p = tuple(tuple(Fraction(v, degree) for v in row) for row in sft.matrix)
        columns = {sum(row[j] for row in sft.matrix) for j in range(sft.size)}
        if len(columns) == 1:
            exact_pi = tuple(Fraction(1, sft.size) for _ in range(sft.size))
    return MarkovMeasure(
        tuple(float(x) for x in stationary),
        tuple(tuple(float(x) for x in row) for row in transitions),
        exact_pi if exact_p is not None else None,
        exact_p if exact_pi is not None else None,
    )


def cylinder_mass(measure: MarkovMeasure, cyl: Cylinder | Sequence[int]) -> Fraction | float:
    word = cyl.word if isinstance(cyl, Cylinder) else tuple(cyl)
    k = len(measure.stationary)
    if any(not 0 <= s < k for s in word):
        raise ValueError("cylinder symbol out of range")
    if measure.exact:
        if not word:
            return Fraction(1)
        mass = measure.exact_stationary[word[0]]
        for a, b in zip(word, word[1:]):
            mass *= measure.exact_transitions[a][b]
        return mass
    if not word:
        return 1.0
    mass = measure.stationary[word[0]]
    for a, b in zip(word, word[1:]):
        mass *= measure.transitions[a][b]
    return mass


def _descend(pm: PiecewiseMap, matrix: TransitionMatrix, node: RefinementNode, symbol: int) -> RefinementNode:
    if not matrix.entries[node.last][symbol]:
        raise ValueError(f"inadmissible transition {node.last + 1} -> {symbol + 1}")
    base = pm.pieces[symbol]
    inverse = node.composite.inverse()
    a = to_unit(inverse(base.arc.start))
    b = to_unit(inverse(base.arc.end))
    start, end = (b, a) if node.composite.antiholomorphic else (a, b)
    label = base.label * node.label if base.label is not None and node.label is not None else None
    return RefinementNode(node.word + (symbol,), Arc(start, end), compose(base.map, node.composite), label)


def _root(pm: PiecewiseMap, symbol: int) -> RefinementNode:
    if not 0 <= symbol < len(pm.pieces):
        raise ValueError(f"symbol {symbol + 1} out of range")
    piece = pm.pieces[symbol]
    return RefinementNode((symbol,), piece.arc, piece.map, piece.label)


def coding_map(obj: Any, word: Cylinder | Sequence[int]) -> Arc:
    """ψ([word]): the arc of points whose itinerary starts with ``word``."""
    pm = as_piecewise(obj)
    symbols = word.word if isinstance(word, Cylinder) else tuple(word)
    if not symbols:
        raise ValueError("cylinder word must be nonempty")
    matrix = check_markov(pm)
    node = _root(pm, symbols[0])
    for s in symbols[1:]:
        node = _descend(pm, matrix, node, s)
    return node.arc


def point_of_itinerary(
    obj: Any,
    period: Sequence[int],
    prefix: Sequence[int] = (),
    tol: float = POINT_TOL,
    max_length: int = ITINERARY_CAP,
) -> BoundaryPoint:
    """The point with itinerary ``prefix`` followed by ``period`` repeated."""
    if not period:
        raise ValueError("period must be nonempty")
    if tol < 1e-11:
        raise ValueError("tolerance below 1e-11 turns is not resolvable")
    pm = as_piecewise(obj)
    matrix = check_markov(pm)
    symbols = itertools.chain(prefix, itertools.cycle(period))
    node = _root(pm, next(symbols))
    for _ in range(max_length):
        if node.arc.length < tol:
            return BoundaryPoint(node.arc.midpoint())
        node = _descend(pm, matrix, node, next(symbols))
    raise ConvergenceError(f"itinerary arcs still wider than {tol} after {max_length} symbols")


@dataclass(frozen=True)
class OrbitWitness:
    """A^m(γ·x) = A^n(x), confirmed by word_y·γ = word_x in the free group."""

    m: int
    n: int
    word_y: FreeWord
    word_x: FreeWord


def _labeled_orbit(pm: PiecewiseMap, z: complex, steps: int) -> list[tuple[complex, FreeWord]]:
    orbit = [(z, IDENTITY_WORD)]
    word = IDENTITY_WORD
    for _ in range(steps):
        piece = pm.pieces[pm.piece_index(z)]
        if piece.label is None:
            raise ValueError("grand-orbit search needs labeled pieces")
        word = piece.label * word
        z = to_unit(piece.map(z))
        orbit.append((z, word))
    return orbit


def _as_complex(x: BoundaryPoint | complex) -> complex:
    return x.value if isinstance(x, BoundaryPoint) else to_unit(complex(x))


def grand_orbit_search(lm: Any, gamma: FreeWord, x: BoundaryPoint | complex, depth: int) -> OrbitWitness | None:
    if not 0 <= depth <= GRAND_ORBIT_CAP:
        raise ValueError(f"search depth must be between 0 and {GRAND_ORBIT_CAP}")
    presentation = getattr(lm, "presentation", None)
    if presentation is None:
        raise ValueError("grand-orbit search needs a labeled map")
    pm = as_piecewise(lm)
    z = _as_complex(x)
    y = to_unit(presentation.evaluate(gamma)(z))
    orbit_x = _labeled_orbit(pm, z, depth)
    orbit_y = _labeled_orbit(pm, y, depth)
    for total in range(2 * depth + 1):
        for m in range(max(0, total - depth), min(total, depth) + 1):
            n = total - m
            point_y, word_y = orbit_y[m]
            point_x, word_x = orbit_x[n]
            if abs(point_y - point_x) <= WITNESS_TOL and word_y * gamma == word_x:
                return OrbitWitness(m, n, word_y, word_x)
    return None


def format_point(z: complex) -> str:
    for value, text in ((1, "1"), (-1, "-1"), (1j, "i"), (-1j, "-i")):
        if abs(z - value) <= 1e-9:
            return text
    return f"{z.real:.6f}{z.imag:+.6f}i"


@dataclass(frozen=True)
class Refutation:
    gamma: FreeWord
    x: complex
    y: complex
    x_period: int
    y_period: int

    def describe(self) -> str:
        text = f"{self.gamma}({format_point(self.x)})={format_point(self.y)}"
        if self.x_period == self.y_period == 1:
            if {format_point(self.x), format_point(self.y)} == {"i", "-i"}:
                return f"{text}; ±i fixed"
            return f"{text}; both fixed"
        return f"{text}; disjoint cycles of periods {self.x_period} and {self.y_period}"


def _cycle(pm: PiecewiseMap, z: complex) -> list[complex] | None:
    try:
        return periodic_cycle(pm, z)
    except NotPeriodicError:
        return None


def find_refutation(lm: Any) -> Refutation | None:
    """A generator moving a periodic break point onto a different periodic cycle."""
    presentation = getattr(lm, "presentation", None)
    if presentation is None:
        raise ValueError("refutation search needs a labeled map")
    pm = as_piecewise(lm)
    generators = presentation.generating_set().elements
    for x in pm.break_points:
        cycle_x = _cycle(pm, x)
        if cycle_x is None:
            continue
        for gamma in generators:
            y = to_unit(presentation.evaluate(gamma)(x))
            cycle_y = _cycle(pm, y)
            if cycle_y is None:
                continue
            if all(abs(a - b) > CYCLE_TOL for a in cycle_x for b in cycle_y):
                return Refutation(gamma, x, y, len(cycle_x), len(cycle_y))
    return None


@dataclass(frozen=True)
class OrbitVerdict:
    status: str
    detail: str
    refutation: Refutation | None = None
    confirmed: int = 0
    samples: int = 0


def orbit_equivalence_heuristic(
    lm: Any,
    depth: int = DEFAULT_OE_DEPTH,
    samples: int = 100,
    seed: int = 2024,
) -> OrbitVerdict:
    refutation = find_refutation(lm)
    if refutation is not None:
        return OrbitVerdict(FAIL, refutation.describe(), refutation)
    generators = lm.presentation.generating_set().elements
    rng = np.random.default_rng(seed)
    confirmed = 0
    missing: list[str] = []
    for _ in range(samples):
        x = from_turn(float(rng.random()))
        gamma = generators[int(rng.integers(len(generators)))]
        if grand_orbit_search(lm, gamma, x, depth) is not None:
            confirmed += 1
        elif len(missing) < 3:
            missing.append(f"{gamma} at turn {turn_of(x):.9f}")
    if confirmed == samples:
        return OrbitVerdict(HEURISTIC_PASS, f"{samples} samples joined within depth {depth}", None, confirmed, samples)
    detail = f"{confirmed}/{samples} samples joined within depth {depth}; unresolved: " + ", ".join(missing)
    return OrbitVerdict(INCONCLUSIVE, detail, None, confirmed, samples)

