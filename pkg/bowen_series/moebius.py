"""Möbius and anti-Möbius maps of the unit disk and the upper half-plane.

A map is stored as a normalized 2x2 complex matrix plus a flag. When the flag
is set the map is ``z -> (a*conj(z) + b) / (c*conj(z) + d)``, so reflections
and "reflection followed by conjugation" compose inside one type.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

DISK = "disk"
HALF_PLANE = "half-plane"
_MODELS = {DISK, HALF_PLANE}

BOUNDARY_TOL = 1e-12
MATRIX_TOL = 1e-10
PARABOLIC_TOL = 1e-9
GEODESIC_SEPARATION = 1e-10

ELLIPTIC = "elliptic"
PARABOLIC = "parabolic"
HYPERBOLIC = "hyperbolic"
IDENTITY = "identity"

# Points farther than this from the unit circle are rejected instead of renormalized.
_DISK_ACCEPT = 1e-6
_ZERO = 1e-14


class Infinity(Enum):
    POINT = "inf"

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = Infinity.POINT


def _check_model(model: str) -> None:
    if model not in _MODELS:
        raise ValueError(f"unknown model: {model}")


def turn_of(z: complex) -> float:
    """Angle of a nonzero complex number in turns, in [0, 1)."""
    t = cmath.phase(z) / (2 * math.pi)
    t = t % 1.0
    return 0.0 if t >= 1.0 else t


def from_turn(t: float) -> complex:
    return cmath.exp(2j * math.pi * t)


def to_unit(z: complex) -> complex:
    r = abs(z)
    if r == 0:
        raise ValueError("zero has no boundary projection")
    return z / r


@dataclass(frozen=True)
class BoundaryPoint:
    value: complex | Infinity
    model: str = DISK

    def __post_init__(self) -> None:
        _check_model(self.model)
        if self.model == DISK:
            if self.value is INFINITY:
                raise ValueError("the unit circle has no point at infinity")
            z = complex(self.value)
            if abs(abs(z) - 1.0) > _DISK_ACCEPT:
                raise ValueError(f"{z} is not on the unit circle")
            object.__setattr__(self, "value", z / abs(z))
            return
        if self.value is INFINITY:
            return
        z = complex(self.value)
        if abs(z.imag) > 1e-9 * max(1.0, abs(z.real)):
            raise ValueError(f"{z} is not on the real line")
        object.__setattr__(self, "value", complex(z.real, 0.0))

    @property
    def is_infinite(self) -> bool:
        return self.value is INFINITY

    @property
    def turn(self) -> float:
        if self.model != DISK:
            raise ValueError("turns are defined for disk points only")
        return turn_of(self.value)

    def to_dict(self) -> dict[str, Any]:
        if self.value is INFINITY:
            return {"model": self.model, "value": "inf"}
        return {"model": self.model, "value": [self.value.real, self.value.imag]}

    @staticmethod
    def from_dict(data: dict[str, Any]) -> "BoundaryPoint":
        raw = data["value"]
        value: complex | Infinity = INFINITY if raw == "inf" else complex(raw[0], raw[1])
        return BoundaryPoint(value=value, model=str(data.get("model", DISK)))


def _normalize(entries: tuple[complex, complex, complex, complex]) -> tuple[complex, complex, complex, complex]:
    a, b, c, d = (complex(x) for x in entries)
    det = a * d - b * c
    if abs(det) < 1e-300:
        raise ValueError("degenerate matrix: determinant is zero")
    s = cmath.sqrt(det)
    a, b, c, d = a / s, b / s, c / s, d / s
    lead = next((x for x in (a, b, c, d) if abs(x) > 1e-12), a)
    if lead.real < -1e-12 or (abs(lead.real) <= 1e-12 and lead.imag < 0):
        a, b, c, d = -a, -b, -c, -d
    return (a, b, c, d)


@dataclass(frozen=True)
class MoebiusMap:
    matrix: tuple[complex, complex, complex, complex]
    antiholomorphic: bool = False
    model: str = DISK
    codomain: str = ""

    def __post_init__(self) -> None:
        _check_model(self.model)
        codomain = self.codomain or self.model
        _check_model(codomain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "matrix", _normalize(tuple(self.matrix)))
        if self.model == DISK and codomain == DISK and not self.antiholomorphic:
            a, b, c, d = self.matrix
            scale = max(1.0, abs(a), abs(b))
            if abs(d - a.conjugate()) > 1e-9 * scale or abs(c - b.conjugate()) > 1e-9 * scale:
                raise ValueError("holomorphic disk map does not preserve the unit disk")

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=complex).reshape(2, 2)

    def __call__(self, z: complex) -> complex:
        a, b, c, d = self.matrix
        w = z.conjugate() if self.antiholomorphic else z
        return (a * w + b) / (c * w + d)

    def inverse(self) -> "MoebiusMap":
        a, b, c, d = self.matrix
        adj = (d, -b, -c, a)
        if self.antiholomorphic:
            adj = tuple(x.conjugate() for x in adj)
        return MoebiusMap(adj, self.antiholomorphic, model=self.codomain, codomain=self.model)

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "codomain": self.codomain,
            "anti": self.antiholomorphic,
            "m": [[x.real, x.imag] for x in self.matrix],
        }

    @staticmethod
    def from_dict(data: dict[str, Any]) -> "MoebiusMap":
        entries = data.get("m")
        if not isinstance(entries, list) or len(entries) != 4:
            raise ValueError("m must hold four [re, im] pairs")
        model = str(data.get("model", DISK))
        return MoebiusMap(
            matrix=tuple(complex(float(re), float(im)) for re, im in entries),
            antiholomorphic=bool(data.get("anti", False)),
            model=model,
            codomain=str(data.get("codomain", model)),
        )


IDENTITY_MAP = MoebiusMap((1, 0, 0, 1))
CONJUGATION = MoebiusMap((1, 0, 0, 1), antiholomorphic=True)


def identity_map(model: str = DISK) -> MoebiusMap:
    return MoebiusMap((1, 0, 0, 1), model=model)


def compose(f: MoebiusMap, g: MoebiusMap) -> MoebiusMap:
    """Return f∘g."""
    if f.model != g.codomain:
        raise ValueError(f"model mismatch: {f.model} after {g.codomain}")
    inner = np.conj(g.array) if f.antiholomorphic else g.array
    product = f.array @ inner
    return MoebiusMap(
        tuple(product.reshape(4)),
        f.antiholomorphic != g.antiholomorphic,
        model=g.model,
        codomain=f.codomain,
    )


def almost_equal(f: MoebiusMap, g: MoebiusMap, tol: float = MATRIX_TOL) -> bool:
    if f.antiholomorphic != g.antiholomorphic or f.model != g.model or f.codomain != g.codomain:
        return False
    same = max(abs(x - y) for x, y in zip(f.matrix, g.matrix))
    flipped = max(abs(x + y) for x, y in zip(f.matrix, g.matrix))
    return min(same, flipped) <= tol


def _apply_value(f: MoebiusMap, value: complex | Infinity) -> complex | Infinity:
    a, b, c, d = f.matrix
    if value is INFINITY:
        if abs(c) < _ZERO:
            return INFINITY
        return a / c
    w = value.conjugate() if f.antiholomorphic else value
    denom = c * w + d
    if abs(denom) < _ZERO * max(1.0, abs(a * w + b)):
        return INFINITY
    return (a * w + b) / denom


def apply(f: MoebiusMap, p: BoundaryPoint) -> BoundaryPoint:
    if p.model != f.model:
        raise ValueError(f"model mismatch: map on {f.model}, point on {p.model}")
    image = _apply_value(f, p.value)
    if f.codomain == DISK:
        if image is INFINITY:
            raise ValueError("disk map sent a boundary point to infinity")
        image = to_unit(image)
    elif image is not INFINITY:
        image = complex(image.real, 0.0)
    return BoundaryPoint(image, f.codomain)


@dataclass(frozen=True)
class Geodesic:
    endpoints: tuple[BoundaryPoint, BoundaryPoint]

    def __post_init__(self) -> None:
        p, q = self.endpoints
        if p.model != q.model:
            raise ValueError("geodesic endpoints live in different models")
        if p.is_infinite or q.is_infinite:
            if p.is_infinite and q.is_infinite:
                raise ValueError("degenerate geodesic")
            return
        if abs(p.value - q.value) <= GEODESIC_SEPARATION:
            raise ValueError("degenerate geodesic: endpoints coincide")

    @property
    def model(self) -> str:
        return self.endpoints[0].model

    def circle(self) -> tuple[complex, float] | None:
        """Center and radius of the supporting circle, or None for a diameter / vertical line."""
        p, q = (e.value for e in self.endpoints)
        if self.model == DISK:
            s = p + q
            if abs(s) < 1e-9:
                return None
            center = 2 * s / abs(s) ** 2
            return center, math.sqrt(max(abs(center) ** 2 - 1.0, 0.0))
        if p is INFINITY or q is INFINITY:
            return None
        return complex((p.real + q.real) / 2, 0.0), abs(p.real - q.real) / 2


def geodesic(z1: complex | BoundaryPoint, z2: complex | BoundaryPoint, model: str = DISK) -> Geodesic:
    ends = tuple(z if isinstance(z, BoundaryPoint) else BoundaryPoint(z, model) for z in (z1, z2))
    return Geodesic(ends)


def reflection_in_geodesic(geo: Geodesic) -> MoebiusMap:
    p, q = (e.value for e in geo.endpoints)
    if geo.model == DISK:
        s = p + q
        if abs(s) < 1e-9:
            # reflection in the diameter through p
            return MoebiusMap((p, 0, 0, p.conjugate()), antiholomorphic=True)
        c = 2 * s / abs(s) ** 2
        return MoebiusMap((c, -1, 1, -c.conjugate()), antiholomorphic=True)
    if p is INFINITY or q is INFINITY:
        foot = (q if p is INFINITY else p).real
        return MoebiusMap((-1, 2 * foot, 0, 1), antiholomorphic=True, model=HALF_PLANE)
    m = (p.real + q.real) / 2
    r = abs(p.real - q.real) / 2
    return MoebiusMap((m, r * r - m * m, 1, -m), antiholomorphic=True, model=HALF_PLANE)


def circle_derivative(f: MoebiusMap, p: BoundaryPoint) -> float:
    """|f'(p)| along the boundary, with the projective charts at infinity."""
    if p.model != f.model:
        raise ValueError(f"model mismatch: map on {f.model}, point on {p.model}")
    a, b, c, d = f.matrix
    if p.is_infinite:
        image = _apply_value(f, INFINITY)
        if image is INFINITY:
            return abs(d / a)
        return 1.0 / abs(c) ** 2
    w = p.value.conjugate() if f.antiholomorphic else p.value
    denom = c * w + d
    if abs(denom) < _ZERO:
        return 1.0 / abs(a * w + b) ** 2
    return 1.0 / abs(denom) ** 2


def classify_element(f: MoebiusMap) -> str:
    if f.antiholomorphic:
        raise ValueError("only holomorphic maps have a trace classification")
    a, b, c, d = f.matrix
    if abs(b) <= MATRIX_TOL and abs(c) <= MATRIX_TOL and abs(a - d) <= MATRIX_TOL and abs(abs(a) - 1) <= MATRIX_TOL:
        if abs(a * a - 1) <= MATRIX_TOL:
            return IDENTITY
    trace = a + d
    if abs(trace.imag) > PARABOLIC_TOL:
        return HYPERBOLIC
    t = abs(trace.real)
    if abs(t - 2.0) <= PARABOLIC_TOL:
        return PARABOLIC
    return ELLIPTIC if t < 2.0 else HYPERBOLIC


def cayley_transform() -> MoebiusMap:
    """M(z) = i(1 - z)/(1 + z): disk onto upper half-plane."""
    return MoebiusMap((-1j, 1j, 1, 1), model=DISK, codomain=HALF_PLANE)


def inverse_cayley_transform() -> MoebiusMap:
    return cayley_transform().inverse()


def three_point_map(p1: complex, p2: complex, p3: complex, q1: complex, q2: complex, q3: complex) -> MoebiusMap:
    """Transformation from p1 -> q1, p2 -> q2, p3 -> q3 (disk model)."""
    a = np.linalg.det(np.array(((p1 * q1, q1, 1), (p2 * q2, q2, 1), (p3 * q3, q3, 1))))
    b = np.linalg.det(np.array(((p1 * q1, p1, q1), (p2 * q2, p2, q2), (p3 * q3, p3, q3))))
    c = np.linalg.det(np.array(((p1, q1, 1), (p2, q2, 1), (p3, q3, 1))))
    d = np.linalg.det(np.array(((p1 * q1, p1, 1), (p2 * q2, p2, 1), (p3 * q3, p3, 1))))
    return MoebiusMap((complex(a), complex(b), complex(c), complex(d)))
