import cmath
import math
import unittest

import numpy as np

from bowen_series.catalog import (
    GAMMA0_VERTICES,
    LabeledMap,
    bowen_series,
    build_named_map,
    completely_folding,
    describe,
    group_presentation,
    higher_bowen_series,
    inner_domain_check,
    interpolating_map,
    lamination_candidates,
    load_map,
    nielsen_conjugacy,
    nielsen_rho2,
    non_example_c,
    piecewise_bowen_series_check,
    punctured_sphere_group,
    reflection_map_n,
    thrice_punctured_group,
)
from bowen_series.circle_maps import evaluate, minimize, refine_iterate, same_pieces
from bowen_series.freegroup import FreeWord
from bowen_series.moebius import PARABOLIC, classify_element, compose, to_unit


def close(z: complex, w: complex, tol: float = 1e-9) -> bool:
    return abs(z - w) <= tol


class TestPresentations(unittest.TestCase):
    def test_punctured_sphere_group_shape(self) -> None:
        gp = punctured_sphere_group(3)
        self.assertEqual(gp.name, "G3")
        self.assertEqual(gp.generator_names, ("g1", "g2", "g3"))
        self.assertEqual(len(gp.domain.vertices), 6)
        self.assertEqual(classify_element(gp.generator("g1")), PARABOLIC)
        self.assertEqual(classify_element(gp.generator("g3")), PARABOLIC)
        self.assertTrue(close(gp.generator("g1")(1), 1))

    def test_punctured_sphere_rejects_small_d(self) -> None:
        with self.assertRaises(ValueError):
            punctured_sphere_group(1)

    def test_thrice_punctured_group_vertex_labels(self) -> None:
        gp = thrice_punctured_group()
        g, h = gp.generator("g"), gp.generator("h")
        v = GAMMA0_VERTICES

        self.assertTrue(close(to_unit(g(v[2])), v[6]))
        self.assertTrue(close(to_unit(g(v[6])), v[4]))
        self.assertTrue(close(to_unit(g(v[1])), v[5]))
        self.assertTrue(close(to_unit(h(v[3])), v[7]))
        self.assertTrue(close(to_unit(h(v[6])), v[8]))

    def test_evaluate_words(self) -> None:
        gp = thrice_punctured_group()
        word = FreeWord.parse("g*h^-1")
        expected = compose(gp.generator("g"), gp.generator("h").inverse())
        z = cmath.exp(0.7j)
        self.assertTrue(close(gp.evaluate(word)(z), expected(z), 1e-12))
        with self.assertRaises(ValueError):
            gp.generator("k")

    def test_group_presentation_by_name(self) -> None:
        self.assertEqual(group_presentation("Gamma0").name, "Gamma0")
        self.assertEqual(group_presentation("G4").free_rank, 4)
        with self.assertRaises(ValueError):
            group_presentation("H2")


class TestFoldingMaps(unittest.TestCase):
    def test_bowen_series_pieces(self) -> None:
        bs = bowen_series(2)
        self.assertEqual(bs.map.arc_names, ("I1", "I2", "I-2", "I-1"))
        self.assertEqual([str(w) for w in bs.labels], ["g1", "g2", "g2^-1", "g1^-1"])

    def test_minimized_folding_map_is_higher_bowen_series(self) -> None:
        for k in range(3, 6):
            with self.subTest(k=k):
                cfm = completely_folding(k)
                hbs = higher_bowen_series(k)
                self.assertTrue(same_pieces(minimize(cfm), hbs))
                self.assertLessEqual(len(hbs.map.pieces), len(cfm.map.pieces))

    def test_folding_and_higher_maps_agree_pointwise(self) -> None:
        rng = np.random.default_rng(7)
        for k in (3, 4):
            cfm, hbs = completely_folding(k), higher_bowen_series(k)
            for t in rng.random(200):
                z = cmath.exp(2j * math.pi * t)
                self.assertTrue(close(evaluate(cfm, z), evaluate(hbs, z), 1e-10))

    def test_hbs3_break_points_are_octagon_vertices(self) -> None:
        hbs = higher_bowen_series(3)
        found = set()
        for z in hbs.map.break_points:
            found.update(n for n, v in GAMMA0_VERTICES.items() if close(z, v))
        self.assertEqual(found, {1, 2, 3, 5, 6, 7})

    def test_interpolating_map_endpoints(self) -> None:
        self.assertTrue(same_pieces(minimize(interpolating_map(3, [1, 3])), higher_bowen_series(3)))
        for k in (3, 4):
            full = interpolating_map(k, list(range(1, k + 1)))
            self.assertTrue(same_pieces(full, completely_folding(k)))

    def test_interpolating_map_validates_selection(self) -> None:
        with self.assertRaises(ValueError):
            interpolating_map(4, [2, 4])
        with self.assertRaises(ValueError):
            interpolating_map(4, [1, 3, 2, 4])

    def test_reflection_map_square_is_higher_bowen_series(self) -> None:
        square = refine_iterate(reflection_map_n(), 2)
        hbs = higher_bowen_series(3)
        rng = np.random.default_rng(1000)
        for t in rng.random(1000):
            z = cmath.exp(2j * math.pi * t)
            self.assertTrue(close(evaluate(square, z), evaluate(hbs, z)))

    def test_nielsen_conjugacy(self) -> None:
        m = nielsen_conjugacy()
        roots = [1, cmath.exp(2j * math.pi / 3), cmath.exp(4j * math.pi / 3)]
        for z, w in zip((-1, 1, 1j), roots):
            self.assertTrue(close(m(z), w))

        rho = nielsen_rho2()
        for w in roots:
            self.assertTrue(close(evaluate(rho, w), w))

        n = reflection_map_n()
        rng = np.random.default_rng(3)
        for t in rng.random(100):
            z = cmath.exp(2j * math.pi * t)
            self.assertTrue(close(to_unit(m(evaluate(n, z))), evaluate(rho, to_unit(m(z))), 1e-8))

    def test_inner_domain_and_side_pairings(self) -> None:
        for k in range(3, 6):
            with self.subTest(k=k):
                self.assertTrue(inner_domain_check(higher_bowen_series(k), k))
                self.assertTrue(piecewise_bowen_series_check(k))


class TestNonExamples(unittest.TestCase):
    def test_non_example_c_fixes_axis_points(self) -> None:
        c = non_example_c()
        for z in (1, -1, 1j, -1j):
            self.assertTrue(close(evaluate(c, z), z))

    def test_labels_reproduce_pieces(self) -> None:
        c = non_example_c()
        self.assertEqual(str(c.labels[1]), "g^-1*h")
        with self.assertRaises(ValueError):
            LabeledMap(c.map, punctured_sphere_group(2))


class TestNamedMaps(unittest.TestCase):
    def test_defaults(self) -> None:
        self.assertEqual(build_named_map("bs").name, "bs2")
        self.assertEqual(build_named_map("hbs").name, "hbs3")
        self.assertEqual(build_named_map("reflectN").name, "reflectN")
        with self.assertRaises(ValueError):
            build_named_map("zeta")

    def test_describe_and_load(self) -> None:
        data = describe(build_named_map("C"))
        self.assertEqual(data["presentation"], "Gamma0")
        loaded = load_map(data)
        self.assertIsInstance(loaded, LabeledMap)
        self.assertTrue(same_pieces(loaded, non_example_c()))

        plain = load_map(describe(reflection_map_n()))
        self.assertTrue(plain.reflection_type)

    def test_lamination_candidates(self) -> None:
        self.assertEqual(lamination_candidates(2), [])
        self.assertEqual([str(w) for w in lamination_candidates(3)], ["g2", "g3^-1*g1"])
        self.assertEqual(
            sorted(str(w) for w in lamination_candidates(4)),
            sorted(["g2", "g3", "g3^-1*g1", "g4^-1*g1", "g4^-1*g2"]),
        )


if __name__ == "__main__":
    unittest.main()
