"""Reduced words, Cayley balls and Patterson-Sullivan cone masses in free groups."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

BALL_LIMIT = 10**7


def _valid_name(name: str) -> bool:
    return bool(name) and name[0].isalpha() and name.isalnum()


def _reduce(syllables: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    word: list[tuple[str, int]] = []
    for gen, power in syllables:
        if power == 0:
            continue
        if word and word[-1][0] == gen:
            word[-1] = (gen, word[-1][1] + power)
            if word[-1][1] == 0:
                word.pop()
        else:
            word.append((gen, power))
    return tuple(word)


@dataclass(frozen=True)
class FreeWord:
    """A reduced word, stored as (generator, power) syllables."""

    syllables: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        for gen, power in self.syllables:
            if not _valid_name(gen):
                raise ValueError(f"Invalid generator: {gen}")
            if not isinstance(power, int):
                raise ValueError(f"Invalid power {power!r} for {gen}")
        object.__setattr__(self, "syllables", _reduce(self.syllables))

    @staticmethod
    def generator(name: str, power: int = 1) -> "FreeWord":
        return FreeWord(((name, power),))

    @staticmethod
    def parse(text: str) -> "FreeWord":
        """Read ``"h*g^-1"`` (``*`` or whitespace between factors); ``"1"`` is the identity."""
        text = text.strip()
        if text in ("", "1"):
            return FreeWord()
        syllables = []
        for token in text.replace("*", " ").split():
            name, _, power = token.partition("^")
            if not _valid_name(name):
                raise ValueError(f"Invalid generator in {text}")
            try:
                syllables.append((name, int(power) if power else 1))
            except ValueError:
                raise ValueError(f"Invalid power in {text}") from None
        return FreeWord(tuple(syllables))

    @property
    def letters(self) -> tuple[tuple[str, int], ...]:
        """The word spelled out in unit letters."""
        out: list[tuple[str, int]] = []
        for gen, power in self.syllables:
            out.extend([(gen, 1 if power > 0 else -1)] * abs(power))
        return tuple(out)

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def __len__(self) -> int:
        return sum(abs(p) for _, p in self.syllables)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.syllables + other.syllables)

    def __invert__(self) -> "FreeWord":
        return FreeWord(tuple((gen, -power) for gen, power in reversed(self.syllables)))

    def inverse(self) -> "FreeWord":
        return ~self

    def __pow__(self, n: int) -> "FreeWord":
        if n < 0:
            return (~self) ** -n
        return FreeWord(self.syllables * n)

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return "*".join(gen if power == 1 else f"{gen}^{power}" for gen, power in self.syllables)


IDENTITY_WORD = FreeWord()


@dataclass(frozen=True)
class GenSet:
    elements: tuple[FreeWord, ...]
    name: str = ""

    def __post_init__(self) -> None:
        elements = tuple(self.elements)
        if not elements:
            raise ValueError("generating set must be nonempty")
        if any(e.is_identity for e in elements):
            raise ValueError("generating set must not contain the identity")
        if len(set(elements)) != len(elements):
            raise ValueError("generating set entries must be distinct")
        object.__setattr__(self, "elements", elements)

    @property
    def basis(self) -> tuple[str, ...]:
        names: list[str] = []
        for e in self.elements:
            for gen, _ in e.syllables:
                if gen not in names:
                    names.append(gen)
        return tuple(names)


def standard_generating_set(d: int, prefix: str = "g") -> GenSet:
    if d < 1:
        raise ValueError("rank must be positive")
    elements = []
    for j in range(1, d + 1):
        elements.append(FreeWord.generator(f"{prefix}{j}"))
        elements.append(FreeWord.generator(f"{prefix}{j}", -1))
    return GenSet(tuple(elements), name=f"standard-{d}")


def hbs_generating_set() -> GenSet:
    words = ("g", "g^-1", "h", "h^-1", "g*h^-1", "h*g^-1")
    return GenSet(tuple(FreeWord.parse(w) for w in words), name="hbs")


@dataclass(frozen=True)
class CayleyBall:
    generating_set: GenSet
    spheres: tuple[tuple[FreeWord, ...], ...]
    _distance: dict[FreeWord, int] = field(default_factory=dict, repr=False, compare=False)

    @property
    def radius(self) -> int:
        return len(self.spheres) - 1

    @property
    def sizes(self) -> list[int]:
        return [len(s) for s in self.spheres]

    def __len__(self) -> int:
        return len(self._distance)

    def __contains__(self, word: FreeWord) -> bool:
        return word in self._distance

    def distance(self, word: FreeWord) -> int | None:
        """Word-metric distance from the identity, or None outside the ball."""
        return self._distance.get(word)


def cayley_ball(gs: GenSet, radius: int, limit: int = BALL_LIMIT) -> CayleyBall:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    distance = {IDENTITY_WORD: 0}
    spheres = [(IDENTITY_WORD,)]
    frontier = [IDENTITY_WORD]
    for r in range(1, radius + 1):
        layer = []
        for w in frontier:
            for s in gs.elements:
                v = w * s
                if v not in distance:
                    distance[v] = r
                    layer.append(v)
            if len(distance) > limit:
                raise ValueError(f"Cayley ball of radius {radius} exceeds {limit} elements")
        spheres.append(tuple(layer))
        frontier = layer
    return CayleyBall(gs, tuple(spheres), distance)


def sphere_sizes(gs: GenSet, rmax: int) -> list[int]:
    return cayley_ball(gs, rmax).sizes


def ball_size(d: int, n: int) -> int:
    """Closed-form ball size for the standard set of F_d."""
    if d == 1:
        return 2 * n + 1
    return 1 + 2 * d * ((2 * d - 1) ** n - 1) // (2 * d - 2)


@dataclass(frozen=True)
class VolumeEntropy:
    finite: float
    exact: float | None
    ratio: Fraction | None


def volume_entropy(gs: GenSet, rmax: int) -> VolumeEntropy:
    if rmax < 4:
        raise ValueError("volume entropy needs rmax >= 4")
    sizes = sphere_sizes(gs, rmax)
    ratios = {Fraction(sizes[r], sizes[r - 1]) for r in range(2, rmax + 1)}
    ratio = ratios.pop() if len(ratios) == 1 else None
    return VolumeEntropy(
        finite=math.log(sizes[rmax] / sizes[rmax - 1]),
        exact=math.log(ratio) if ratio is not None else None,
        ratio=ratio,
    )


def poincare_partial(gs: GenSet, s: float, rmax: int) -> float:
    """Σ_{|g| <= rmax} e^{-s|g|}."""
    sizes = sphere_sizes(gs, rmax)
    return math.fsum(n * math.exp(-s * r) for r, n in enumerate(sizes))


def poincare_ratio(gs: GenSet, s: float, rmax: int) -> float:
    """Ratio of consecutive Poincaré terms at the outermost sphere."""
    sizes = sphere_sizes(gs, rmax)
    return math.exp(-s) * sizes[rmax] / sizes[rmax - 1]


def _bisect(predicate: Callable[[float], bool], low: float, high: float, tol: float) -> tuple[float, float]:
    """Shrink [low, high] with predicate(low) true and predicate(high) false."""
    while high - low > tol:
        mid = (low + high) / 2
        if predicate(mid):
            low = mid
        else:
            high = mid
    return low, high


def critical_exponent_bracket(gs: GenSet, rmax: int, eps: float = 0.01) -> tuple[float, float]:
    """[s_low, s_high] around the abscissa of convergence of Σ e^{-s|g|}.

    Ratio test over the outer half of the ball: below s_low every tail term
    grows, above s_high every tail term shrinks. Each end is located by
    bisection to within ``eps``.
    """
    if rmax < 4:
        raise ValueError("critical exponent bracket needs rmax >= 4")
    if eps <= 0:
        raise ValueError("eps must be positive")
    sizes = sphere_sizes(gs, rmax)
    ratios = [sizes[r] / sizes[r - 1] for r in range(max(2, rmax // 2 + 1), rmax + 1)]
    if min(ratios) <= 1:
        raise ValueError("spheres do not grow; the Poincaré series has no critical exponent")

    def diverging(s: float) -> bool:
        return all(math.exp(-s) * q > 1 for q in ratios)

    def converging(s: float) -> bool:
        return all(math.exp(-s) * q < 1 for q in ratios)

    top = math.log(max(ratios)) + 1.0
    low, _ = _bisect(diverging, 0.0, top, eps)
    _, high = _bisect(lambda s: not converging(s), 0.0, top, eps)
    return low, high


@dataclass(frozen=True)
class ConeMass:
    partial: Fraction
    limit: Fraction


def ps_limit_cone_mass(d: int, r: int) -> Fraction:
    if d < 2 or r < 0:
        raise ValueError("need d >= 2 and r >= 0")
    if r == 0:
        return Fraction(1)
    return Fraction(1, 2 * d * (2 * d - 1) ** (r - 1))


def ps_partial_cone_mass(d: int, n: int, r: int) -> ConeMass:
    """μ_{n+r} of the cone at a length-r element, standard generating set."""
    if d < 2 or n < 0 or r < 0:
        raise ValueError("need d >= 2 and n, r >= 0")
    q = 2 * d - 1
    if r == 0:
        return ConeMass(Fraction(1), Fraction(1))
    total = 1 + Fraction(2 * d * (n + r), q)
    return ConeMass(Fraction(n + 1, q**r) / total, ps_limit_cone_mass(d, r))


def ps_partial_measure(gs: GenSet, n: int) -> dict[FreeWord, Fraction]:
    """μ_n: weight λ^{-|g|} on the radius-n ball, normalized (λ the exact sphere growth)."""
    ball = cayley_ball(gs, max(n, 2))
    sizes = ball.sizes
    if sizes[1] == 0:
        raise ValueError("empty sphere")
    growth = Fraction(sizes[2], sizes[1])
    weights = {w: growth ** -r for r, sphere in enumerate(ball.spheres[: n + 1]) for w in sphere}
    total = sum(weights.values())
    return {w: m / total for w, m in weights.items()}


def cone_membership(g: FreeWord, h: FreeWord, gs: GenSet, ball: CayleyBall | None = None) -> bool:
    if ball is None:
        ball = cayley_ball(gs, max(len(g), len(h)))
    dg, dh = ball.distance(g), ball.distance(h)
    if dg is None or dh is None:
        raise ValueError("ball radius does not cover the query")
    dgh = ball.distance(~g * h)
    if dgh is None:
        # d(g, h) exceeds the radius, which is at least d(1, h)
        return False
    return dh == dg + dgh


def enumerated_cone_mass(gs: GenSet, g: FreeWord, n: int) -> Fraction:
    """μ_n(cone(g)) by summing over the Cayley ball."""
    measure = ps_partial_measure(gs, n)
    ball = cayley_ball(gs, max(n, 2))
    return sum(
        (mass for h, mass in measure.items() if cone_membership(g, h, gs, ball)),
        Fraction(0),
    )


def boundary_mass_scaling(d: int, r: int) -> Fraction:
    return ps_limit_cone_mass(d, r) * (2 * d - 1) ** r


def gromov_boundary_dimension(d: int, r: int) -> float:
    """-ln μ(cylinder) / -ln diam(cylinder) for cylinders of diameter e^{-r}."""
    if r < 1:
        raise ValueError("need r >= 1")
    return -math.log(ps_limit_cone_mass(d, r)) / r


@dataclass(frozen=True)
class CylinderCount:
    radius: int
    sphere: int
    cylinders: int
    correspondence: dict[tuple[int, ...], FreeWord] | None = None

    @property
    def matches(self) -> bool:
        return self.sphere == self.cylinders


def boundary_cylinder_counts(
    gs: GenSet,
    r: int,
    matrix: Sequence[Sequence[int]],
    symbol_words: Sequence[FreeWord] | None = None,
) -> CylinderCount:
    """Compare the radius-r sphere with the rank-r admissible words of ``matrix``.

    With ``symbol_words`` (the piece label of each symbol) the bijection
    s_1...s_r ↦ l_{s_1}^{-1}...l_{s_r}^{-1} is built and checked as well:
    the cylinder is the set where A^r acts by the inverse of that element.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    m = np.array(matrix, dtype=np.int64)
    vector = np.ones(m.shape[0], dtype=np.int64)
    for _ in range(r - 1):
        vector = m @ vector
    cylinders = int(vector.sum())
    ball = cayley_ball(gs, r)
    sphere = len(ball.spheres[r])
    correspondence = None
    if symbol_words is not None:
        correspondence = {}
        words = [(s,) for s in range(m.shape[0])]
        for _ in range(r - 1):
            words = [w + (j,) for w in words for j in range(m.shape[0]) if m[w[-1], j]]
        for w in words:
            product = IDENTITY_WORD
            for s in w:
                product = product * ~symbol_words[s]
            correspondence[w] = product
        images = set(correspondence.values())
        if len(images) != len(words) or images != set(ball.spheres[r]):
            raise ValueError("cylinders and sphere elements do not correspond")
    if sphere != cylinders:
        raise ValueError(f"sphere has {sphere} elements but there are {cylinders} cylinders")
    return CylinderCount(r, sphere, cylinders, correspondence)
