from django.core.cache import cache
from django.test import SimpleTestCase
from mpmath import mp, mpf

from numerics.exceptions import DomainError, IndexOutOfRangeError
from numerics.precision import agreed_bits, guarded_precision, precision
from numerics.quadrature import integrate_halfline

from .hankel import (
    base_moments,
    get_cache_key,
    hankel_determinants,
    hankel_route,
    moment_table,
    weber_hermite_moments,
)
from .tables import CoeffTable, WeightParams


class WeightParamsTests(SimpleTestCase):
    def test_alpha_must_exceed_minus_one(self):
        for alpha in (-1, "-1.5"):
            with self.assertRaises(DomainError):
                WeightParams(alpha, 0)

    def test_shifted_and_with_t(self):
        params = WeightParams("0.5", 1)
        self.assertEqual(params.shifted().alpha, mpf("1.5"))
        self.assertEqual(params.with_t(2).t, 2)
        self.assertEqual(params.with_t(2).alpha, params.alpha)

    def test_cache_token_is_exact(self):
        """Test that t = 2^-32 and t = 0 get distinct cache tokens."""
        with precision(256):
            h = mpf(2) ** -32
            self.assertNotEqual(
                WeightParams(1, h).cache_token, WeightParams(1, 0).cache_token
            )


class MomentTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_base_moments_closed_form(self):
        with precision(256):
            mu0, mu1 = base_moments(WeightParams(1, 0))
            self.assertLess(abs(mu0 - mpf(1) / 2), mpf("1e-70"))
            self.assertLess(abs(mu1 - mp.sqrt(mp.pi) / 4), mpf("1e-70"))

    def test_weber_hermite_moments_match_series(self):
        """The parabolic cylinder closed form reproduces the gamma series."""
        for alpha in ("-0.5", "1", "2.5"):
            for t in ("-2", "0", "3"):
                params = WeightParams(alpha, t)
                series = base_moments(params, 256)
                closed = weber_hermite_moments(params, 256)
                with precision(256):
                    for expected, value in zip(series, closed):
                        self.assertLess(
                            abs(value - expected), mpf("1e-60") * expected, (alpha, t)
                        )

    def test_moment_table_closed_form(self):
        with precision(256):
            table = moment_table(WeightParams(1, 0), 3)
            self.assertLess(abs(table.mu[2] - mpf(1) / 2), mpf("1e-70"))
            self.assertLess(abs(table.mu[3] - 3 * mp.sqrt(mp.pi) / 8), mpf("1e-70"))

    def test_moment_recursion_holds(self):
        with precision(256):
            table = moment_table(WeightParams("2.5", "-2"), 12)
            for k in range(table.size - 1):
                self.assertLess(
                    abs(table.recursion_defect(k)), mpf("1e-60") * table.mu[k + 2]
                )

    def test_moments_agree_with_quadrature(self):
        for alpha, t in (("0.5", "1"), ("1", "-2")):
            with precision(256):
                params = WeightParams(alpha, t)
                table = moment_table(params, 5)
                for k, mu in enumerate(table.mu):
                    expected = integrate_halfline(params.alpha + k, params.t)
                    self.assertLess(abs(mu - expected), mpf("1e-30") * expected)

    def test_moment_table_size_must_be_positive(self):
        with self.assertRaises(DomainError):
            moment_table(WeightParams(1, 0), 0)


class HankelRouteTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_closed_form_coefficients(self):
        with precision(256):
            coeffs = hankel_route(WeightParams(1, 0), 1)
            self.assertLess(abs(coeffs.b[0] - mp.sqrt(mp.pi) / 2), mpf("1e-30"))
            self.assertLess(abs(coeffs.a2[1] - (1 - mp.pi / 4)), mpf("1e-30"))
            self.assertEqual(coeffs.a2[0], 0)
            self.assertEqual(coeffs.route, "hankel")

    def test_determinant_conventions(self):
        d, d_prime = hankel_determinants([mpf(1), mpf(2)], 0)
        self.assertEqual((d, d_prime), (1, 0))
        with precision(256):
            d, d_prime = hankel_determinants([mpf(1), mpf(2)], 1)
            self.assertEqual((d, d_prime), (1, 2))

    def test_determinants_are_positive(self):
        bits = guarded_precision(256, 10)
        with precision(bits):
            table = moment_table(WeightParams("0.5", "3"), 21, bits)
            for n in range(1, 11):
                d, _ = hankel_determinants(table.mu, n)
                self.assertGreater(d, 0)

    def test_coefficients_are_positive(self):
        coeffs = hankel_route(WeightParams("2.5", "-2"), 12)
        self.assertTrue(all(value > 0 for value in coeffs.a2[1:]))
        self.assertEqual(coeffs.precision_bits, guarded_precision(256, 12))

    def test_raising_precision_keeps_agreed_digits(self):
        """Test that tables at 256 and 384 bits agree to 128 - 8n bits."""
        params = WeightParams(1, 1)
        low = hankel_route(params, 6, precision_bits=256)
        high = hankel_route(params, 6, precision_bits=384)
        for n in range(1, 7):
            self.assertGreaterEqual(agreed_bits(low.a2[n], high.a2[n]), 128 - 8 * n)
            self.assertGreaterEqual(agreed_bits(low.b[n], high.b[n]), 128 - 8 * n)

    def test_tables_are_cached(self):
        params = WeightParams(1, 0)
        coeffs = hankel_route(params, 3)
        key = get_cache_key(
            "hankel", params.cache_token, 3, guarded_precision(None, 3)
        )
        self.assertEqual(cache.get(key), coeffs)

    def test_n_max_must_be_positive(self):
        with self.assertRaises(DomainError):
            hankel_route(WeightParams(1, 0), 0)


class CoeffTableTests(SimpleTestCase):
    def setUp(self):
        self.coeffs = CoeffTable(
            params=WeightParams(1, 0),
            a2=(mpf(0), mpf(1)),
            b=(mpf(2), mpf(3)),
            route="hankel",
            precision_bits=256,
        )

    def test_index_out_of_range(self):
        with self.assertRaises(IndexOutOfRangeError):
            self.coeffs.beta(2)

    def test_perturbed_copy(self):
        shifted = self.coeffs.perturbed("b", 1, 1)
        self.assertEqual(shifted.b, (2, 4))
        self.assertEqual(self.coeffs.b, (2, 3))

    def test_unknown_route_is_rejected(self):
        with self.assertRaises(DomainError):
            CoeffTable(
                params=WeightParams(1, 0),
                a2=(mpf(0),),
                b=(mpf(0),),
                route="lanczos",
                precision_bits=256,
            )
