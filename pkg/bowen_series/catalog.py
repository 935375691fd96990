"""Concrete groups and circle maps: Bowen-Series, folding and higher Bowen-Series maps."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Any, Sequence

from .circle_maps import (
    IdealPolygon,
    Piece,
    PiecewiseMap,
    minimize,
    refine_iterate,
)
from .freegroup import FreeWord, GenSet
from .moebius import (
    CONJUGATION,
    ELLIPTIC,
    IDENTITY,
    MATRIX_TOL,
    MoebiusMap,
    almost_equal,
    classify_element,
    compose,
    geodesic,
    identity_map,
    reflection_in_geodesic,
    three_point_map,
    to_unit,
)

SIDE_PAIRING_TOL = 1e-9

# Labels of the octagon vertices used for the thrice-punctured sphere.
GAMMA0_VERTICES = {
    1: complex(-1, 0),
    2: complex(0, -1),
    3: complex(1, 0),
    4: complex(4, 3) / 5,
    5: complex(3, 4) / 5,
    6: complex(0, 1),
    7: complex(-3, 4) / 5,
    8: complex(-4, 3) / 5,
}

CATALOG_MAPS = ("bs", "hbs", "cfm", "interp", "B", "C", "nielsen", "reflectN")


@dataclass(frozen=True)
class SidePairing:
    source: tuple[complex, complex]
    generator: str
    target: tuple[complex, complex]


@dataclass(frozen=True)
class GroupPresentation:
    name: str
    generators: tuple[tuple[str, MoebiusMap], ...]
    domain: IdealPolygon
    side_pairings: tuple[SidePairing, ...]

    def __post_init__(self) -> None:
        for gen_name, m in self.generators:
            if m.antiholomorphic:
                raise ValueError(f"generator {gen_name} is antiholomorphic")
            if classify_element(m) in (ELLIPTIC, IDENTITY):
                raise ValueError(f"generator {gen_name} is {classify_element(m)}")
        for pairing in self.side_pairings:
            m = self.generator(pairing.generator)
            images = [to_unit(m(z)) for z in pairing.source]
            hits = {
                next((n for n, t in enumerate(pairing.target) if abs(t - z) <= SIDE_PAIRING_TOL), None)
                for z in images
            }
            if hits != {0, 1}:
                raise ValueError(f"{pairing.generator} does not carry {pairing.source} onto {pairing.target}")

    @property
    def free_rank(self) -> int:
        return len(self.generators)

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.generators)

    def generator(self, name: str) -> MoebiusMap:
        for gen_name, m in self.generators:
            if gen_name == name:
                return m
        raise ValueError(f"unknown generator: {name}")

    def evaluate(self, word: FreeWord) -> MoebiusMap:
        result = identity_map()
        for gen_name, power in word.syllables:
            step = self.generator(gen_name)
            if power < 0:
                step = step.inverse()
            for _ in range(abs(power)):
                result = compose(result, step)
        return result

    def generating_set(self) -> GenSet:
        elements = []
        for gen_name in self.generator_names:
            elements.append(FreeWord.generator(gen_name))
            elements.append(FreeWord.generator(gen_name, -1))
        return GenSet(tuple(elements), name=f"{self.name}-standard")


@dataclass(frozen=True)
class LabeledMap:
    map: PiecewiseMap
    presentation: GroupPresentation

    def __post_init__(self) -> None:
        for i, piece in enumerate(self.map.pieces):
            if piece.label is None:
                raise ValueError(f"piece {i} carries no label")
            if not almost_equal(self.presentation.evaluate(piece.label), piece.map, MATRIX_TOL):
                raise ValueError(f"label {piece.label} does not reproduce piece {i}")

    @property
    def name(self) -> str:
        return self.map.name

    @property
    def labels(self) -> tuple[FreeWord, ...]:
        return tuple(piece.label for piece in self.map.pieces)


def _labeled(
    gp: GroupPresentation,
    points: Sequence[complex],
    words: Sequence[FreeWord],
    names: Sequence[str] | None,
    name: str,
) -> LabeledMap:
    maps = [gp.evaluate(w) for w in words]
    pm = PiecewiseMap.from_break_points(points, maps, labels=words, names=names, name=name)
    return LabeledMap(pm, gp)


def _relabel(lm: LabeledMap, name: str, names: Sequence[str] | None = None) -> LabeledMap:
    pieces = lm.map.pieces
    names = names or [p.name for p in pieces]
    renamed = tuple(Piece(p.arc, p.map, p.label, n) for p, n in zip(pieces, names))
    return LabeledMap(PiecewiseMap(renamed, name=name), lm.presentation)


def _gamma0_names(points: Sequence[complex]) -> list[str] | None:
    labels = []
    for z in points:
        hit = next((v for v, w in GAMMA0_VERTICES.items() if abs(w - z) <= 1e-9), None)
        if hit is None:
            return None
        labels.append(str(hit))
    return [labels[i] + labels[(i + 1) % len(labels)] for i in range(len(labels))]


def punctured_sphere_group(d: int) -> GroupPresentation:
    """G_d: side pairings of the ideal 2d-gon with vertices at the 2d-th roots of unity."""
    if d < 2:
        raise ValueError("d must be at least 2")
    p = [cmath.exp(1j * math.pi * (j - 1) / d) for j in range(1, d + 2)]
    p[d] = complex(-1, 0)
    generators = []
    pairings = []
    for j in range(1, d + 1):
        g = compose(CONJUGATION, reflection_in_geodesic(geodesic(p[j - 1], p[j])))
        generators.append((f"g{j}", g))
        pairings.append(SidePairing((p[j - 1], p[j]), f"g{j}", (p[j - 1].conjugate(), p[j].conjugate())))
    vertices = p + [z.conjugate() for z in reversed(p[1:d])]
    return GroupPresentation(f"G{d}", tuple(generators), IdealPolygon(tuple(vertices)), tuple(pairings))


def bowen_series(d: int) -> LabeledMap:
    gp = punctured_sphere_group(d)
    p = list(gp.domain.vertices[: d + 1])
    points = p + [z.conjugate() for z in reversed(p[1:d])]
    words = [FreeWord.generator(f"g{j}") for j in range(1, d + 1)]
    words += [FreeWord.generator(f"g{j}", -1) for j in range(d, 0, -1)]
    names = [f"I{j}" for j in range(1, d + 1)] + [f"I-{j}" for j in range(d, 0, -1)]
    return _labeled(gp, points, words, names, f"bs{d}")


def gamma0_reflections() -> tuple[MoebiusMap, MoebiusMap, MoebiusMap]:
    """r_1, r_2, r_3: reflections in the geodesics (-1, 1), (1, i), (i, -1)."""
    r1 = reflection_in_geodesic(geodesic(-1, 1))
    r2 = reflection_in_geodesic(geodesic(1, 1j))
    r3 = reflection_in_geodesic(geodesic(1j, -1))
    return r1, r2, r3


def thrice_punctured_group() -> GroupPresentation:
    r1, r2, r3 = gamma0_reflections()
    g = compose(r2, r1)
    h = compose(r3, r1)
    v = GAMMA0_VERTICES
    if abs(g(v[2]) - v[6]) > SIDE_PAIRING_TOL:
        raise ValueError("vertex labels inconsistent: g(-i) must be i")
    if abs(g(v[3]) - v[3]) > SIDE_PAIRING_TOL or abs(h(v[1]) - v[1]) > SIDE_PAIRING_TOL:
        raise ValueError("vertex labels inconsistent: g must fix 1 and h must fix -1")
    pairings = (
        SidePairing((v[2], v[3]), "g", (v[6], v[3])),
        SidePairing((v[1], v[2]), "h", (v[1], v[6])),
    )
    domain = IdealPolygon((v[1], v[2], v[3], v[6]))
    return GroupPresentation("Gamma0", (("g", g), ("h", h)), domain, pairings)


@dataclass(frozen=True)
class FoldingVertex:
    point: complex
    word: FreeWord
    interior_top: int | None


def _marked_polygon(k: int) -> tuple[GroupPresentation, dict[int, FreeWord], list[complex], list[complex]]:
    """The presentation, gen_i words and top/bottom vertices t_1..t_k, b_1..b_k."""
    if k < 3:
        raise ValueError("k must be at least 3")
    if k == 3:
        gp = thrice_punctured_group()
        gens = {1: FreeWord.generator("h"), 2: FreeWord.generator("g")}
    else:
        gp = punctured_sphere_group(k - 1)
        gens = {i: FreeWord.generator(f"g{k - i}", -1) for i in range(1, k)}
    top = [cmath.exp(1j * math.pi * (k - i) / (k - 1)) for i in range(1, k + 1)]
    top[0], top[-1] = complex(-1, 0), complex(1, 0)
    bottom = [z.conjugate() for z in top]
    return gp, gens, top, bottom


def _folding_table(k: int) -> tuple[GroupPresentation, list[FoldingVertex]]:
    gp, gens, top, bottom = _marked_polygon(k)
    t = {i: top[i - 1] for i in range(1, k + 1)}
    b = {i: bottom[i - 1] for i in range(1, k + 1)}
    table = [FoldingVertex(b[i], gens[i], None) for i in range(1, k)]
    for i in range(k - 1, 0, -1):
        gen_i = gp.evaluate(gens[i])
        inverse = ~gens[i]

        def w(j: int) -> complex:
            if j <= i:
                return b[i - j + 1]
            if j <= i + k - 1:
                return t[j - i + 1]
            return b[2 * k - 1 + i - j]

        def vertex(j: int) -> complex:
            if j == 1:
                return t[i]
            if j == 2 * k - 2:
                return t[i + 1]
            return to_unit(gen_i(w(j)))

        for j in range(2 * k - 3, 0, -1):
            if j <= i - 1:
                word = gens[i - j] * inverse
            elif j >= i + k - 1:
                word = gens[2 * k - 2 + i - j] * inverse
            else:
                word = inverse
            start = j + 1
            interior = start - i + 1 if i + 1 <= start <= i + k - 2 else None
            table.append(FoldingVertex(vertex(start), word, interior))
    return gp, table


def completely_folding(k: int) -> LabeledMap:
    gp, table = _folding_table(k)
    points = [v.point for v in table]
    names = _gamma0_names(points) if k == 3 else None
    return _labeled(gp, points, [v.word for v in table], names, f"cfm{k}")


def higher_bowen_series(k: int) -> LabeledMap:
    cfm = completely_folding(k)
    reduced = minimize(cfm.map)
    names = _gamma0_names(reduced.break_points) if k == 3 else [f"A{i + 1}" for i in range(len(reduced.pieces))]
    return _relabel(LabeledMap(reduced, cfm.presentation), f"hbs{k}", names)


def interpolating_map(k: int, selection: Sequence[int]) -> LabeledMap:
    """A_L: the folding map keeping only the selected top vertices as break points."""
    chosen = list(selection)
    if len(chosen) < 2 or chosen[0] != 1 or chosen[-1] != k:
        raise ValueError("selection must start at 1 and end at k")
    if any(b <= a for a, b in zip(chosen, chosen[1:])):
        raise ValueError("selection must be strictly increasing")
    keep = set(chosen)
    gp, table = _folding_table(k)
    kept = [v for v in table if v.interior_top is None or v.interior_top in keep]
    label = "-".join(str(i) for i in chosen)
    return _labeled(gp, [v.point for v in kept], [v.word for v in kept], None, f"interp{k}[{label}]")


def non_example_b(k: int) -> LabeledMap:
    """A_BS on the lower semicircle and its second iterate on the upper one."""
    bs = bowen_series(k - 1)
    square = refine_iterate(bs.map, 2)
    upper = [p for p in square.pieces if p.arc.start_turn < 0.5 - 1e-12]
    lower = [p for p in bs.map.pieces if p.arc.start_turn >= 0.5 - 1e-12]
    pieces = sorted(upper, key=lambda p: p.arc.start_turn) + sorted(lower, key=lambda p: p.arc.start_turn)
    merged = minimize(PiecewiseMap(tuple(pieces), name=f"B{k}"))
    return LabeledMap(merged, bs.presentation)


non_example_B = non_example_b


def non_example_c() -> LabeledMap:
    gp = thrice_punctured_group()
    points = [
        complex(-1, 0),
        complex(-3, -4) / 5,
        complex(0, -1),
        complex(3, -4) / 5,
        complex(1, 0),
        complex(3, 4) / 5,
        complex(0, 1),
        complex(-3, 4) / 5,
    ]
    words = [FreeWord.parse(w) for w in ("h", "g^-1*h", "h^-1*g", "g", "g^-1", "h*g^-1", "g*h^-1", "h^-1")]
    return _labeled(gp, points, words, None, "C")


non_example_C = non_example_c


def reflection_map_n() -> PiecewiseMap:
    """Piecewise reflection in the sides of the ideal triangle (-1, 1, i)."""
    r1, r2, r3 = gamma0_reflections()
    return PiecewiseMap.from_break_points(
        [complex(-1, 0), complex(1, 0), complex(0, 1)],
        [r1, r2, r3],
        names=["13", "36", "61"],
        reflection_type=True,
        name="reflectN",
    )


reflection_map_N = reflection_map_n


def _cube_roots() -> list[complex]:
    return [complex(1, 0), cmath.exp(2j * math.pi / 3), cmath.exp(4j * math.pi / 3)]


def nielsen_rho2() -> PiecewiseMap:
    v = _cube_roots()
    maps = [reflection_in_geodesic(geodesic(v[i], v[(i + 1) % 3])) for i in range(3)]
    return PiecewiseMap.from_break_points(v, maps, reflection_type=True, name="nielsen")


def nielsen_conjugacy() -> MoebiusMap:
    """The Möbius map taking (-1, 1, i) to the cube roots of unity."""
    v = _cube_roots()
    return three_point_map(complex(-1, 0), complex(1, 0), complex(0, 1), v[0], v[1], v[2])


def lamination_candidates(d: int) -> list[FreeWord]:
    if d < 2:
        raise ValueError("d must be at least 2")
    words = [FreeWord.generator(f"g{j}") for j in range(2, d)]
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            if i - j > 1:
                words.append(FreeWord.generator(f"g{i}", -1) * FreeWord.generator(f"g{j}"))
    unique: list[FreeWord] = []
    for w in words:
        if w not in unique:
            unique.append(w)
    return unique


def _is_top_edge(a: int, b: int, k: int) -> bool:
    return abs(a - b) == 1 or {a, b} == {1, k}


def inner_domain_check(lm: LabeledMap, k: int) -> bool:
    """Each piece sends the edge of R over its arc onto an edge of the top polygon D."""
    _, _, top, _ = _marked_polygon(k)

    def top_index(z: complex) -> int | None:
        return next((i + 1 for i, t in enumerate(top) if abs(t - z) <= 1e-9), None)

    for piece in lm.map.pieces:
        ends = [top_index(to_unit(piece.map(z))) for z in (piece.arc.start, piece.arc.end)]
        if None in ends or not _is_top_edge(ends[0], ends[1], k):
            return False
    return True


def piecewise_bowen_series_check(k: int) -> bool:
    """hBS pieces act as side pairings of W below and of D ∪ gen_j(P) on top edge j."""
    lm = higher_bowen_series(k)
    gp, gens, top, bottom = _marked_polygon(k)
    w_vertices = top + bottom

    def member(z: complex, pool: Sequence[complex]) -> bool:
        return any(abs(z - p) <= 1e-9 for p in pool)

    for piece in lm.map.pieces:
        ends = (piece.arc.start, piece.arc.end)
        images = [to_unit(piece.map(z)) for z in ends]
        if piece.arc.start.imag < -1e-12 or (abs(piece.arc.start.imag) <= 1e-12 and piece.arc.start.real < 0):
            pool = w_vertices
        else:
            mid = piece.arc.midpoint()
            j = next(
                i for i in range(1, k)
                if (cmath.phase(top[i]) - 1e-12) <= cmath.phase(mid) <= (cmath.phase(top[i - 1]) + 1e-12)
            )
            fold = gp.evaluate(gens[j])
            pool = top + [to_unit(fold(z)) for z in bottom]
        if not all(member(z, pool) for z in (*ends, *images)):
            return False
    return True


def build_named_map(
    name: str,
    d: int | None = None,
    k: int | None = None,
    selection: Sequence[int] | None = None,
) -> LabeledMap | PiecewiseMap:
    """Shared factory for the command line, the web API and the MCP tools."""
    if name == "bs":
        return bowen_series(d if d is not None else 2)
    if name == "hbs":
        return higher_bowen_series(k if k is not None else 3)
    if name == "cfm":
        return completely_folding(k if k is not None else 3)
    if name == "interp":
        size = k if k is not None else 3
        return interpolating_map(size, selection if selection else [1, size])
    if name == "B":
        return non_example_b(k if k is not None else 3)
    if name == "C":
        return non_example_c()
    if name == "nielsen":
        return nielsen_rho2()
    if name == "reflectN":
        return reflection_map_n()
    raise ValueError(f"unknown map: {name} (expected one of {', '.join(CATALOG_MAPS)})")


def describe(obj: Any) -> dict[str, Any]:
    """JSON form of a catalog map, with the presentation name when labeled."""
    pm = obj.map if isinstance(obj, LabeledMap) else obj
    data = pm.to_dict()
    if isinstance(obj, LabeledMap):
        data["presentation"] = obj.presentation.name
    return data


def group_presentation(name: str) -> GroupPresentation:
    if name == "Gamma0":
        return thrice_punctured_group()
    if name.startswith("G") and name[1:].isdigit():
        return punctured_sphere_group(int(name[1:]))
    raise ValueError(f"unknown presentation: {name}")


def load_map(data: dict[str, Any]) -> LabeledMap | PiecewiseMap:
    """Inverse of ``describe``."""
    pm = PiecewiseMap.from_dict(data)
    presentation = data.get("presentation")
    if presentation:
        return LabeledMap(pm, group_presentation(str(presentation)))
    return pm
