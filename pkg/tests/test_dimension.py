import math
import unittest
from fractions import Fraction

from bowen_series.dimension import (
    LEFT,
    FlPiece,
    IntervalMarkovMap,
    birkhoff_hausdorff_estimate,
    f_bs,
    f_hbs,
    hausdorff_mme,
    interval_map,
    log_deriv,
    lyapunov_bracket,
    question_mark_conjugacy_check,
    tau,
    times_three,
    vertex_set,
)
from bowen_series.moebius import INFINITY

RANK_THREE_VERTICES = """
0 1/7 1/6 1/5 2/9 3/13 1/4 3/11 2/7 1/3 3/8 5/13 2/5 7/17
5/12 3/7 4/9 5/11 1/2 5/9 4/7 3/5 5/8 7/11 2/3 5/7 3/4 1
"""


class TestIntervalMaps(unittest.TestCase):
    def test_exact_values(self) -> None:
        bs = f_bs()
        self.assertEqual(bs(Fraction(1, 7)), Fraction(1, 5))
        self.assertEqual(bs(Fraction(3, 7)), Fraction(1, 2))
        self.assertEqual(bs("1/3"), 0)
        self.assertEqual(f_hbs()(Fraction(1, 4)), Fraction(2, 3))

    def test_shape(self) -> None:
        self.assertEqual(f_bs().branches, 3)
        self.assertEqual(f_hbs().break_points, (Fraction(1, 2),))
        self.assertAlmostEqual(f_bs().entropy, math.log(3))
        self.assertEqual(interval_map("hbs3").name, "hbs3")
        with self.assertRaises(ValueError):
            interval_map("bs4")

    def test_rejects_bad_partitions(self) -> None:
        with self.assertRaises(ValueError):
            IntervalMarkovMap("gap", (FlPiece(2, 0, 0, 1, Fraction(0), Fraction(1, 2)),))
        with self.assertRaises(ValueError):
            IntervalMarkovMap("short", (FlPiece(1, 0, 0, 2, Fraction(0), Fraction(1)),))
        with self.assertRaises(ValueError):
            FlPiece(1, 1, 1, 1, Fraction(0), Fraction(1))

    def test_one_sided_log_derivatives(self) -> None:
        bs = f_bs()
        self.assertEqual(log_deriv(bs, 0), 0.0)
        self.assertAlmostEqual(log_deriv(bs, "1/3", LEFT), 2 * math.log(3))
        with self.assertRaises(ValueError):
            log_deriv(bs, 0, LEFT)

    def test_tau(self) -> None:
        self.assertEqual(tau(Fraction(1, 3)), 1)
        self.assertEqual(tau(Fraction(-3)), -1)
        self.assertIs(tau(Fraction(1, 2)), INFINITY)
        self.assertIs(tau(INFINITY), INFINITY)


class TestVertices(unittest.TestCase):
    def test_bs3_vertices(self) -> None:
        self.assertEqual(vertex_set(f_bs(), 1), [0, Fraction(1, 3), Fraction(1, 2), 1])
        rank3 = vertex_set(f_bs(), 3)
        expected = [Fraction(text) for text in RANK_THREE_VERTICES.split()]
        self.assertEqual(len(rank3), 28)
        self.assertEqual(rank3, expected)

    def test_vertices_map_to_previous_rank(self) -> None:
        bs = f_bs()
        rank2 = set(vertex_set(bs, 2))
        for v in vertex_set(bs, 3)[:-1]:
            self.assertIn(bs(v), rank2)

    def test_rank_cap(self) -> None:
        with self.assertRaises(ValueError):
            vertex_set(f_bs(), 13)
        self.assertEqual(len(vertex_set(f_hbs(), 4)), 17)

    def test_question_mark_conjugacy(self) -> None:
        for rank in range(1, 9):
            with self.subTest(rank=rank):
                self.assertTrue(question_mark_conjugacy_check(rank))


class TestDimension(unittest.TestCase):
    def test_rank_three_lyapunov_bracket(self) -> None:
        bracket = lyapunov_bracket(f_bs(), 3)
        self.assertGreaterEqual(bracket.lower, 1.2005)
        self.assertLessEqual(bracket.lower, 1.2015)
        self.assertLessEqual(bracket.hd_upper, 0.915)
        self.assertLess(bracket.hd_lower, bracket.hd_upper)
        self.assertEqual(set(bracket.to_dict()), {"rank", "lyapunov_lower", "lyapunov_upper", "lower", "upper"})

    def test_linear_map_has_full_dimension(self) -> None:
        estimate = hausdorff_mme(times_three(), 0.01)
        self.assertTrue(estimate.reached)
        self.assertEqual(estimate.rank, 1)
        self.assertAlmostEqual(estimate.lower, 1.0, places=12)
        self.assertAlmostEqual(estimate.upper, 1.0, places=12)

    def test_hbs_bracket_and_monte_carlo_agree(self) -> None:
        estimate = hausdorff_mme("hbs3", 0.02)
        self.assertTrue(estimate.reached)
        self.assertLess(estimate.upper, 1.0)
        sampled = birkhoff_hausdorff_estimate(samples=20000, seed=7)
        self.assertGreaterEqual(sampled, estimate.lower - 0.01)
        self.assertLessEqual(sampled, estimate.upper + 0.01)

    def test_bs3_bracket_at_one_hundredth(self) -> None:
        estimate = hausdorff_mme("bs3", 0.01)
        self.assertTrue(estimate.reached)
        self.assertLessEqual(estimate.upper - estimate.lower, 0.01)
        self.assertGreaterEqual(estimate.lower, 0.85)
        self.assertLessEqual(estimate.upper, 0.86)

    def test_hbs_bracket_contains_seven_eighths(self) -> None:
        estimate = hausdorff_mme("hbs3", 0.02)
        self.assertLessEqual(estimate.lower, 0.875)
        self.assertGreaterEqual(estimate.upper, 0.875)

    def test_width_floor(self) -> None:
        with self.assertRaises(ValueError):
            hausdorff_mme("bs3", 1e-4)


if __name__ == "__main__":
    unittest.main()
