import math
import unittest
from fractions import Fraction

import numpy as np

from bowen_series.catalog import bowen_series, higher_bowen_series, non_example_c, reflection_map_n
from bowen_series.circle_maps import HEURISTIC_PASS, evaluate
from bowen_series.freegroup import FreeWord
from bowen_series.symbolic import (
    Cylinder,
    Sft,
    admissible_words,
    coding_map,
    count_admissible,
    cylinder_mass,
    entropy,
    find_refutation,
    format_point,
    full_shift,
    grand_orbit_search,
    orbit_equivalence_heuristic,
    parry_measure,
    perron,
    point_of_itinerary,
    sft_of,
    transition_graph,
)


class TestSft(unittest.TestCase):
    def test_validation(self) -> None:
        with self.assertRaises(ValueError):
            Sft(((1, 0),))
        with self.assertRaises(ValueError):
            Sft(((1, 2), (0, 1)))
        with self.assertRaises(ValueError):
            Sft(((1, 1), (1, 1)), ("a",))

    def test_irreducibility(self) -> None:
        self.assertTrue(sft_of(bowen_series(2)).is_irreducible())
        self.assertFalse(Sft(((1, 0), (0, 1))).is_irreducible())

    def test_admissible_words(self) -> None:
        sft = sft_of(bowen_series(2))
        self.assertEqual(len(admissible_words(sft, 2)), 12)
        for n in range(1, 6):
            self.assertEqual(count_admissible(sft, n), 4 * 3 ** (n - 1))
        self.assertTrue(sft.admissible([0, 1, 1]))
        self.assertFalse(sft.admissible([1, 2]))
        self.assertFalse(sft.admissible([0, 3]))
        self.assertFalse(sft.admissible([4]))
        with self.assertRaises(ValueError):
            admissible_words(sft, 0)

    def test_transition_graph(self) -> None:
        graph = transition_graph(sft_of(bowen_series(2)))
        self.assertEqual(graph.number_of_nodes(), 4)
        self.assertEqual(graph.number_of_edges(), 12)
        self.assertEqual(graph.nodes[0]["label"], "I1")


class TestPerronAndEntropy(unittest.TestCase):
    def test_perron_eigenvalue(self) -> None:
        data = perron([[2, 1], [1, 2]])
        self.assertAlmostEqual(data.eigenvalue, 3.0, places=10)
        self.assertAlmostEqual(data.right[0], data.right[1], places=10)

    def test_perron_rejects_bad_input(self) -> None:
        with self.assertRaises(ValueError):
            perron([[1, -1], [0, 1]])
        with self.assertRaises(ValueError):
            perron([[1, 1]])

    def test_entropies(self) -> None:
        self.assertAlmostEqual(entropy(full_shift(3)), math.log(3), places=10)
        self.assertAlmostEqual(entropy(sft_of(bowen_series(2))), math.log(3), places=10)
        self.assertAlmostEqual(entropy(sft_of(bowen_series(3))), math.log(5), places=10)
        self.assertAlmostEqual(entropy(sft_of(higher_bowen_series(3))), math.log(4), places=10)


class TestParryMeasure(unittest.TestCase):
    def test_bowen_series_measure_is_exact(self) -> None:
        measure = parry_measure(sft_of(bowen_series(2)))
        self.assertTrue(measure.exact)
        self.assertEqual(cylinder_mass(measure, Cylinder.parse("1")), Fraction(1, 4))
        self.assertEqual(cylinder_mass(measure, Cylinder.parse("1,2")), Fraction(1, 12))
        self.assertEqual(cylinder_mass(measure, Cylinder.parse("1,4")), Fraction(0))
        self.assertEqual(cylinder_mass(measure, ()), Fraction(1))

    def test_bowen_series_three_masses(self) -> None:
        sft = sft_of(bowen_series(3))
        measure = parry_measure(sft)
        self.assertTrue(measure.exact)
        for n in range(1, 7):
            with self.subTest(n=n):
                masses = {cylinder_mass(measure, word) for word in admissible_words(sft, n)}
                self.assertEqual(masses, {Fraction(1, 6 * 5 ** (n - 1))})

    def test_higher_bowen_series_masses(self) -> None:
        sft = sft_of(higher_bowen_series(3))
        measure = parry_measure(sft)
        for n in range(1, 4):
            for word in admissible_words(sft, n):
                self.assertEqual(cylinder_mass(measure, word), Fraction(1, 6 * 4 ** (n - 1)))

    def test_inexact_measure_still_sums_to_one(self) -> None:
        sft = Sft(((1, 1), (1, 0)))
        measure = parry_measure(sft)
        self.assertFalse(measure.exact)
        total = sum(cylinder_mass(measure, w) for w in admissible_words(sft, 3))
        self.assertAlmostEqual(total, 1.0, places=10)
        golden = (1 + math.sqrt(5)) / 2
        self.assertAlmostEqual(perron(sft.matrix).eigenvalue, golden, places=10)

    def test_out_of_range_symbol(self) -> None:
        measure = parry_measure(full_shift(2))
        with self.assertRaises(ValueError):
            cylinder_mass(measure, (2,))

    def test_parse_rejects_garbage(self) -> None:
        self.assertEqual(Cylinder.parse("1,3").word, (0, 2))
        with self.assertRaises(ValueError):
            Cylinder.parse("1,x")


class TestCoding(unittest.TestCase):
    def test_coding_map_nests(self) -> None:
        bs = bowen_series(2)
        parent = coding_map(bs, [0])
        child = coding_map(bs, [0, 1])

        self.assertAlmostEqual(parent.length, 0.25)
        self.assertLess(child.length, parent.length)
        self.assertTrue(parent.contains(child.midpoint()))
        with self.assertRaises(ValueError):
            coding_map(bs, [0, 3])
        with self.assertRaises(ValueError):
            coding_map(bs, [])

    def test_cylinder_children_partition_parent(self) -> None:
        bs = bowen_series(2)
        total = sum(coding_map(bs, [0, j]).length for j in (0, 1, 2))
        self.assertAlmostEqual(total, 0.25, places=12)

    def test_periodic_itineraries_are_semi_conjugate(self) -> None:
        bs = bowen_series(2)
        sft = sft_of(bs)
        cyclic = [
            w
            for n in (2, 3, 4)
            for w in admissible_words(sft, n)
            if sft.admissible(w + w[:1]) and len(set(w)) > 1
        ]
        rng = np.random.default_rng(11)
        for index in rng.choice(len(cyclic), size=20, replace=False):
            word = cyclic[int(index)]
            with self.subTest(word=word):
                p = point_of_itinerary(bs, word, tol=1e-9)
                q = point_of_itinerary(bs, word[1:] + word[:1], tol=1e-9)
                image = evaluate(bs, p.value)
                self.assertLess(abs(image - q.value), 1e-5)
                self.assertTrue(coding_map(bs, word[:1]).contains(p.value))

    def test_constant_itinerary_tends_to_cusp(self) -> None:
        p = point_of_itinerary(bowen_series(2), [0], tol=1e-3)
        self.assertLess(abs(p.value - 1), 0.01)
        with self.assertRaises(ValueError):
            point_of_itinerary(bowen_series(2), [0], tol=1e-12)
        with self.assertRaises(ValueError):
            point_of_itinerary(bowen_series(2), [])


class TestOrbitEquivalence(unittest.TestCase):
    def test_refutation_for_non_example_c(self) -> None:
        refutation = find_refutation(non_example_c())
        self.assertIsNotNone(refutation)
        self.assertEqual(refutation.describe(), "g(-i)=i; ±i fixed")

    def test_bowen_series_has_no_refutation(self) -> None:
        self.assertIsNone(find_refutation(bowen_series(2)))

    def test_heuristic_joins_bowen_series_orbits(self) -> None:
        verdict = orbit_equivalence_heuristic(bowen_series(2), samples=5)
        self.assertEqual(verdict.status, HEURISTIC_PASS)
        self.assertEqual(verdict.confirmed, 5)

    def test_grand_orbit_search_on_generator_arc(self) -> None:
        hbs = higher_bowen_series(3)
        g = FreeWord.parse("g")
        piece = next(p for p in hbs.map.pieces if p.label == g)
        witness = grand_orbit_search(hbs, g, piece.arc.midpoint(), 3)

        self.assertIsNotNone(witness)
        self.assertEqual((witness.m, witness.n), (0, 1))
        self.assertEqual(witness.word_x, g)

    def test_grand_orbit_search_off_generator_arc(self) -> None:
        hbs = higher_bowen_series(3)
        g = FreeWord.parse("g")
        piece = next(p for p in hbs.map.pieces if p.label == FreeWord.parse("h"))
        witness = grand_orbit_search(hbs, g, piece.arc.midpoint(), 3)

        self.assertIsNotNone(witness)
        self.assertEqual(witness.word_y * g, witness.word_x)

    def test_grand_orbit_search_separates_fixed_points_of_c(self) -> None:
        for depth in range(6):
            with self.subTest(depth=depth):
                self.assertIsNone(grand_orbit_search(non_example_c(), FreeWord.parse("g"), -1j, depth))

    def test_grand_orbit_search_limits(self) -> None:
        with self.assertRaises(ValueError):
            grand_orbit_search(bowen_series(2), FreeWord.parse("g1"), 1j, 6)
        with self.assertRaises(ValueError):
            grand_orbit_search(reflection_map_n(), FreeWord.parse("g"), 1j, 2)

    def test_format_point(self) -> None:
        self.assertEqual(format_point(-1j), "-i")
        self.assertEqual(format_point(0.6 + 0.8j), "0.600000+0.800000i")


if __name__ == "__main__":
    unittest.main()
