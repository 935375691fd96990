import math
import unittest
from fractions import Fraction

from bowen_series.catalog import bowen_series, higher_bowen_series
from bowen_series.circle_maps import check_markov
from bowen_series.freegroup import (
    FreeWord,
    GenSet,
    ball_size,
    boundary_cylinder_counts,
    boundary_mass_scaling,
    cayley_ball,
    cone_membership,
    critical_exponent_bracket,
    enumerated_cone_mass,
    gromov_boundary_dimension,
    hbs_generating_set,
    poincare_ratio,
    ps_partial_cone_mass,
    sphere_sizes,
    standard_generating_set,
    volume_entropy,
)
from bowen_series.symbolic import admissible_words, cylinder_mass, parry_measure, sft_of


class TestFreeWord(unittest.TestCase):
    def test_parse_reduces(self) -> None:
        self.assertTrue(FreeWord.parse("g1*g1^-1").is_identity)
        word = FreeWord.parse("g h h g^-1")
        self.assertEqual(str(word), "g*h^2*g^-1")
        self.assertEqual(len(word), 4)
        self.assertEqual(str(FreeWord.parse("1")), "1")

    def test_parse_rejects_bad_tokens(self) -> None:
        with self.assertRaises(ValueError):
            FreeWord.parse("1g")
        with self.assertRaises(ValueError):
            FreeWord.parse("g^x")

    def test_group_operations(self) -> None:
        w = FreeWord.parse("g*h^-1")
        self.assertTrue((w * ~w).is_identity)
        self.assertEqual(str(w**-2), "h*g^-1*h*g^-1")
        self.assertEqual(len(w.letters), 2)

    def test_generating_set_validation(self) -> None:
        with self.assertRaises(ValueError):
            GenSet(())
        with self.assertRaises(ValueError):
            GenSet((FreeWord(),))
        with self.assertRaises(ValueError):
            GenSet((FreeWord.parse("g"), FreeWord.parse("g")))
        self.assertEqual(hbs_generating_set().basis, ("g", "h"))


class TestGrowth(unittest.TestCase):
    def test_standard_sphere_sizes(self) -> None:
        gs = standard_generating_set(2)
        self.assertEqual(gs.name, "standard-2")
        self.assertEqual(sphere_sizes(gs, 7), [1, 4, 12, 36, 108, 324, 972, 2916])
        self.assertEqual(sphere_sizes(standard_generating_set(3), 4), [1, 6, 30, 150, 750])
        self.assertEqual(len(cayley_ball(gs, 3)), ball_size(2, 3))
        self.assertEqual(ball_size(1, 4), 9)

    def test_hbs_sphere_sizes(self) -> None:
        self.assertEqual(sphere_sizes(hbs_generating_set(), 6), [1, 6, 24, 96, 384, 1536, 6144])

    def test_volume_entropy(self) -> None:
        result = volume_entropy(standard_generating_set(3), 5)
        self.assertEqual(result.ratio, Fraction(5))
        self.assertAlmostEqual(result.exact, math.log(5))
        with self.assertRaises(ValueError):
            volume_entropy(standard_generating_set(2), 3)

    def test_critical_exponent(self) -> None:
        gs = standard_generating_set(2)
        low, high = critical_exponent_bracket(gs, 6)
        self.assertLessEqual(high - low, 0.02)
        self.assertLess(low, math.log(3))
        self.assertGreater(high, math.log(3))
        self.assertGreater(poincare_ratio(gs, math.log(3) - 0.1, 6), 1.0)
        self.assertLess(poincare_ratio(gs, math.log(3) + 0.1, 6), 1.0)

    def test_critical_exponent_narrows_with_tolerance(self) -> None:
        for d in (2, 3):
            gs = standard_generating_set(d)
            target = math.log(2 * d - 1)
            widths = []
            for eps in (1e-2, 1e-4, 1e-8):
                with self.subTest(d=d, eps=eps):
                    low, high = critical_exponent_bracket(gs, 6, eps)
                    self.assertAlmostEqual(low, target, delta=eps)
                    self.assertAlmostEqual(high, target, delta=eps)
                    self.assertGreater(poincare_ratio(gs, low, 6), 1.0)
                    self.assertLess(poincare_ratio(gs, high, 6), 1.0)
                    widths.append(high - low)
            self.assertTrue(all(a > b for a, b in zip(widths, widths[1:])))

    def test_critical_exponent_of_hbs_generators(self) -> None:
        low, high = critical_exponent_bracket(hbs_generating_set(), 6, 1e-6)
        self.assertAlmostEqual(low, math.log(4), delta=1e-6)
        self.assertAlmostEqual(high, math.log(4), delta=1e-6)

    def test_critical_exponent_needs_growth(self) -> None:
        with self.assertRaises(ValueError):
            critical_exponent_bracket(standard_generating_set(1), 6)
        with self.assertRaises(ValueError):
            critical_exponent_bracket(standard_generating_set(2), 3)

    def test_ball_limit(self) -> None:
        with self.assertRaises(ValueError):
            cayley_ball(standard_generating_set(2), 10, limit=100)
        with self.assertRaises(ValueError):
            cayley_ball(standard_generating_set(2), -1)


class TestConeMasses(unittest.TestCase):
    def test_closed_form_partial_mass(self) -> None:
        mass = ps_partial_cone_mass(2, 10, 2)
        self.assertEqual(mass.partial, Fraction(11, 153))
        self.assertEqual(mass.limit, Fraction(1, 12))
        self.assertEqual(ps_partial_cone_mass(3, 4, 0).partial, Fraction(1))
        with self.assertRaises(ValueError):
            ps_partial_cone_mass(1, 3, 1)

    def test_enumeration_matches_closed_form(self) -> None:
        gs = standard_generating_set(2)
        g = FreeWord.parse("g1*g2")
        self.assertEqual(enumerated_cone_mass(gs, g, 5), ps_partial_cone_mass(2, 3, 2).partial)

    def test_cone_membership(self) -> None:
        gs = standard_generating_set(2)
        g = FreeWord.parse("g1")
        self.assertTrue(cone_membership(g, FreeWord.parse("g1*g2"), gs))
        self.assertFalse(cone_membership(g, FreeWord.parse("g2*g1"), gs))

    def test_boundary_scaling(self) -> None:
        for d in (2, 3, 4):
            for r in (1, 3):
                self.assertEqual(boundary_mass_scaling(d, r), Fraction(2 * d - 1, 2 * d))
        expected = (math.log(4) + 2 * math.log(3)) / 3
        self.assertAlmostEqual(gromov_boundary_dimension(2, 3), expected)

    def test_cylinders_correspond_to_sphere(self) -> None:
        bs = bowen_series(2)
        matrix = check_markov(bs).entries
        count = boundary_cylinder_counts(standard_generating_set(2), 3, matrix, bs.labels)
        self.assertTrue(count.matches)
        self.assertEqual(count.sphere, 36)
        self.assertEqual(str(count.correspondence[(0, 1, 1)]), "g1^-1*g2^-2")

    def test_hbs_cylinders_correspond_to_sphere(self) -> None:
        hbs = higher_bowen_series(3)
        matrix = check_markov(hbs).entries
        for r, expected in zip(range(1, 6), (6, 24, 96, 384, 1536)):
            with self.subTest(r=r):
                count = boundary_cylinder_counts(hbs_generating_set(), r, matrix, hbs.labels)
                self.assertTrue(count.matches)
                self.assertEqual(count.cylinders, expected)
                self.assertEqual(len(set(count.correspondence.values())), expected)

    def test_partial_mass_tends_to_parry_mass(self) -> None:
        for d in (2, 3):
            sft = sft_of(bowen_series(d))
            measure = parry_measure(sft)
            for r in (1, 2, 3):
                with self.subTest(d=d, r=r):
                    limit = ps_partial_cone_mass(d, 1, r).limit
                    for word in admissible_words(sft, r):
                        self.assertEqual(cylinder_mass(measure, word), limit)
                    gaps = [limit - ps_partial_cone_mass(d, n, r).partial for n in (10, 100, 1000, 10000)]
                    self.assertTrue(all(gap > 0 for gap in gaps))
                    self.assertTrue(all(a > b for a, b in zip(gaps, gaps[1:])))
                    self.assertLess(gaps[-1] / limit, 1e-3)


if __name__ == "__main__":
    unittest.main()
