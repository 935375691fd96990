import math
import unittest
from fractions import Fraction

import numpy as np

from bowen_series.catalog import bowen_series, reflection_map_n
from bowen_series.circle_maps import PiecewiseMap, ccw_offset, evaluate
from bowen_series.conjugacy import (
    CircleHomeo,
    HMap,
    build_phi,
    h_map,
    is_dyadic,
    minkowski_q,
    minkowski_q_inverse,
    mme_arc_mass,
    rank_arcs,
)
from bowen_series.dimension import f_bs, vertex_set
from bowen_series.moebius import IDENTITY_MAP, turn_of


def turn_gap(z: complex, w: complex) -> float:
    o = ccw_offset(turn_of(z), turn_of(w))
    return min(o, 1.0 - o)


class TestCircleHomeo(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        cls.bs = bowen_series(2)
        cls.phi = build_phi(cls.bs, depth=20)

    def test_anchor_and_degree(self) -> None:
        self.assertEqual(self.phi.degree, 3)
        self.assertEqual(len(self.phi.preimages), 3)
        value = self.phi.evaluate(0)
        self.assertEqual(value.point, 1)
        self.assertEqual(value.error, 0.0)

    def test_digits(self) -> None:
        self.assertEqual(self.phi.digits(Fraction(1, 4), 6), [0, 2, 0, 2, 0, 2])
        self.assertEqual(self.phi.digits("1/3", 3), [1, 0, 0])

    def test_conjugates_tripling(self) -> None:
        for theta in (Fraction(1, 7), Fraction(2, 5), Fraction(5, 11), Fraction(9, 10)):
            with self.subTest(theta=theta):
                here = self.phi.evaluate(theta, 20)
                there = self.phi.evaluate((3 * theta) % 1, 19)
                image = evaluate(self.bs, here.point)
                self.assertLessEqual(turn_gap(image, there.point), there.error + 1e-12)

    def test_quarter_turn_symmetry(self) -> None:
        for theta in (Fraction(1, 7), Fraction(1, 10)):
            a = self.phi.evaluate(theta)
            b = self.phi.evaluate(theta + Fraction(1, 4))
            self.assertLessEqual(turn_gap(1j * a.point, b.point), a.error + b.error + 1e-12)

    def test_random_thetas_conjugate_and_rotate(self) -> None:
        rng = np.random.default_rng(3)
        for k in rng.integers(1, 10**6, size=1000):
            theta = Fraction(int(k), 10**6)
            here = self.phi.evaluate(theta, 20)
            there = self.phi.evaluate((3 * theta) % 1, 19)
            image = evaluate(self.bs, here.point)
            self.assertLessEqual(turn_gap(image, there.point), there.error + 1e-12, msg=str(theta))

            turned = self.phi.evaluate(theta + Fraction(1, 4))
            self.assertLessEqual(turn_gap(1j * here.point, turned.point), here.error + turned.error + 1e-12, msg=str(theta))

    def test_quarter_maps_to_cusp(self) -> None:
        value = self.phi.evaluate(Fraction(1, 4))
        self.assertLessEqual(turn_gap(value.point, 1j), value.error)

    def test_inverse_recovers_digits(self) -> None:
        theta = Fraction(1, 7)
        back = self.phi.inverse(self.phi(theta), depth=15)
        self.assertLess(abs(float(back) - 1 / 7), 1e-6)

    def test_rejects_unsuitable_maps(self) -> None:
        with self.assertRaises(ValueError):
            CircleHomeo(reflection_map_n())
        flat = PiecewiseMap.from_break_points([1, 1j, -1, -1j], [IDENTITY_MAP] * 4)
        with self.assertRaises(ValueError):
            CircleHomeo(flat)
        with self.assertRaises(ValueError):
            CircleHomeo(self.bs, depth=0)


class TestRankArcs(unittest.TestCase):
    def test_rank_two_arcs_tile_the_circle(self) -> None:
        phi = build_phi(bowen_series(2), depth=4)
        arcs = rank_arcs(phi, 2)
        self.assertEqual(len(arcs), 9)
        self.assertAlmostEqual(sum(a.length for a in arcs), 1.0, places=12)
        for a, b in zip(arcs, arcs[1:]):
            self.assertAlmostEqual(abs(a.end - b.start), 0.0, places=12)

        self.assertEqual(mme_arc_mass(phi, arcs[4], 2), Fraction(1, 9))
        self.assertEqual(mme_arc_mass(phi, None, 0), Fraction(1))

    def test_arc_index_out_of_range(self) -> None:
        phi = build_phi(bowen_series(2), depth=4)
        with self.assertRaises(ValueError):
            phi.rank_arc(9, 2)
        with self.assertRaises(ValueError):
            rank_arcs(phi, 0)
        with self.assertRaises(ValueError):
            rank_arcs(phi, 11)


class TestQuestionMark(unittest.TestCase):
    def test_known_values(self) -> None:
        self.assertEqual(minkowski_q(Fraction(1, 3)), Fraction(1, 4))
        self.assertEqual(minkowski_q("2/5"), Fraction(3, 8))
        self.assertEqual(minkowski_q(1), 1)
        self.assertEqual(minkowski_q_inverse(Fraction(3, 8)), Fraction(2, 5))

    def test_farey_fractions_go_to_dyadics_in_order(self) -> None:
        farey = sorted({Fraction(p, q) for q in range(1, 51) for p in range(q + 1)})
        images = [minkowski_q(x) for x in farey]
        self.assertTrue(all(is_dyadic(y) for y in images))
        self.assertTrue(all(a < b for a, b in zip(images, images[1:])))

    def test_inverse_of_non_dyadic(self) -> None:
        approx = minkowski_q_inverse(Fraction(1, 3))
        self.assertLess(abs(float(approx) - (3 - math.sqrt(5)) / 2), 1e-6)

    def test_domain_errors(self) -> None:
        with self.assertRaises(ValueError):
            minkowski_q(Fraction(3, 2))
        with self.assertRaises(ValueError):
            minkowski_q(0.1)
        with self.assertRaises(ValueError):
            minkowski_q_inverse(-1)


class TestHMap(unittest.TestCase):
    def test_endpoints(self) -> None:
        self.assertEqual(h_map(0).value, 0.0)
        self.assertEqual(h_map(1).value, 1.0)
        with self.assertRaises(ValueError):
            h_map(Fraction(5, 4))

    def test_triadic_points_hit_interval_vertices(self) -> None:
        h = HMap(build_phi(bowen_series(2), depth=20))
        vertices = vertex_set(f_bs(), 2)
        for k in range(1, 9):
            with self.subTest(k=k):
                value = h.evaluate(Fraction(k, 9))
                self.assertLessEqual(value.lower - 1e-9, float(vertices[k]))
                self.assertGreaterEqual(value.upper + 1e-9, float(vertices[k]))

    def test_triadic_points_up_to_rank_five(self) -> None:
        h = HMap(build_phi(bowen_series(2), depth=20))
        for n in range(1, 6):
            vertices = vertex_set(f_bs(), n)
            self.assertEqual(len(vertices), 3**n + 1)
            for k in range(1, 3**n):
                with self.subTest(n=n, k=k):
                    value = h.evaluate(Fraction(k, 3**n))
                    self.assertLessEqual(value.lower - 1e-9, float(vertices[k]))
                    self.assertGreaterEqual(value.upper + 1e-9, float(vertices[k]))

    def test_monotone(self) -> None:
        h = HMap(build_phi(bowen_series(2), depth=15))
        values = [h(Fraction(k, 16)) for k in range(17)]
        self.assertTrue(all(a <= b for a, b in zip(values, values[1:])))


if __name__ == "__main__":
    unittest.main()
