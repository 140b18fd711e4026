from django.core.cache import cache
from django.test import SimpleTestCase
from mpmath import mp, mpf

from discrete_system.orbit import orbit_state
from moments.hankel import hankel_route
from moments.tables import WeightParams
from numerics.exceptions import HypothesisError, IndexOutOfRangeError
from numerics.precision import precision

from .operators import (
    eval_orthonormal,
    eval_orthonormal_all,
    ladder_from_coeffs,
    orthonormality_gram,
    verify_conditions,
    w_equals_Rn_check,
)


class LadderCoeffsTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_closed_form_values(self):
        coeffs = hankel_route(WeightParams(1, 0), 2)
        with precision(256):
            first = ladder_from_coeffs(coeffs, 0)
            second = ladder_from_coeffs(coeffs, 1)
            self.assertLess(abs(first.R - mp.sqrt(mp.pi)), mpf("1e-30"))
            self.assertEqual(first.r, 0)
            self.assertLess(abs(second.r - (1 - mp.pi / 2)), mpf("1e-30"))

    def test_R_matches_orbit(self):
        params = WeightParams("2.5", 1)
        coeffs = hankel_route(params, 8)
        for n in range(9):
            with precision(256):
                q = orbit_state(params, n).q()
                R = ladder_from_coeffs(coeffs, n).R
                self.assertLess(abs(R - q), mpf("1e-25"), n)

    def test_nonpositive_alpha_is_rejected(self):
        coeffs = hankel_route(WeightParams("-0.5", 0), 2)
        with self.assertRaises(HypothesisError):
            ladder_from_coeffs(coeffs, 1)
        with self.assertRaises(HypothesisError):
            verify_conditions(coeffs)


class ConditionTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_conditions_vanish(self):
        for alpha in ("0.5", "1", "2.5"):
            for t in ("-2", "0", "3"):
                coeffs = hankel_route(WeightParams(alpha, t), 16)
                rows = verify_conditions(coeffs, n_max=15)
                for row in rows:
                    self.assertLessEqual(
                        abs(row.residual), mpf("1e-25"), (alpha, t, row.identity, row.n)
                    )

    def test_index_ranges(self):
        """Test that each identity covers only the indices where it is defined."""
        coeffs = hankel_route(WeightParams(1, 0), 3)
        rows = verify_conditions(coeffs)
        covered = {}
        for row in rows:
            covered.setdefault(row.identity, []).append(row.n)
        self.assertEqual(covered["cond2"], [0, 1, 2])
        self.assertEqual(covered["second_equation"], [0, 1, 2])
        self.assertEqual(covered["cond7"], [1, 2])
        self.assertEqual(covered["first_equation"], [1, 2])

    def test_table_must_reach_next_index(self):
        coeffs = hankel_route(WeightParams(1, 0), 3)
        with self.assertRaises(IndexOutOfRangeError):
            verify_conditions(coeffs, n_max=3)

    def test_perturbed_coefficient_is_detected(self):
        """Test that a shifted a_1^2 shows up in the cond7 residual."""
        coeffs = hankel_route(WeightParams(1, 0), 3).perturbed("a2", 1, mpf("1e-8"))
        rows = verify_conditions(coeffs)
        cond7 = next(row for row in rows if row.identity == "cond7" and row.n == 1)
        self.assertGreater(abs(cond7.residual), mpf("1e-10"))
        self.assertLess(abs(cond7.residual), mpf("1e-6"))


class OrthonormalPolynomialTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_first_polynomial_is_constant(self):
        coeffs = hankel_route(WeightParams(1, 0), 2)
        with precision(256):
            value = eval_orthonormal(coeffs, 0, "0.7")
            self.assertLess(abs(value - mp.sqrt(2)), mpf("1e-30"))

    def test_all_values_agree_with_single(self):
        coeffs = hankel_route(WeightParams("0.5", 1), 4)
        with precision(256):
            values = eval_orthonormal_all(coeffs, 4, mpf("1.25"))
            self.assertEqual(len(values), 5)
            self.assertEqual(values[3], eval_orthonormal(coeffs, 3, "1.25"))

    def test_gram_matrix_is_identity(self):
        coeffs = hankel_route(WeightParams(1, 0), 3)
        gram = orthonormality_gram(coeffs, 3)
        with precision(256):
            for j in range(4):
                for k in range(4):
                    expected = 1 if j == k else 0
                    self.assertLess(abs(gram[j, k] - expected), mpf("1e-20"), (j, k))

    def test_index_beyond_table_is_rejected(self):
        coeffs = hankel_route(WeightParams(1, 0), 2)
        with self.assertRaises(IndexOutOfRangeError):
            eval_orthonormal(coeffs, 3, 0)


class WEqualsRTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_first_member(self):
        lhs, rhs = w_equals_Rn_check(WeightParams(1, 0), 0)
        with precision(256):
            self.assertLess(abs(lhs - mp.sqrt(mp.pi)), mpf("1e-30"))
            self.assertLess(abs(rhs - mp.sqrt(mp.pi)), mpf("1e-20"))

    def test_sides_agree(self):
        """R_n from the orbit matches the weighted quadrature of p_n^2."""
        for alpha in ("1", "2.5"):
            for t in ("0", "1"):
                for n in range(9):
                    lhs, rhs = w_equals_Rn_check(WeightParams(alpha, t), n)
                    self.assertLessEqual(abs(lhs - rhs), mpf("1e-15"), (alpha, t, n))

    def test_alpha_zero_is_rejected(self):
        with self.assertRaises(HypothesisError):
            w_equals_Rn_check(WeightParams(0, 0), 1)
