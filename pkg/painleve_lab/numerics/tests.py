from unittest import mock

from django.core.cache import cache
from django.test import SimpleTestCase, override_settings
from mpmath import mp, mpf

from .conf import default_tolerances, lab_setting
from .exceptions import (
    ConvergenceError,
    DivergentIntegralError,
    DomainError,
    PrecisionExhaustedError,
)
from .precision import (
    agreed_bits,
    fd_step,
    guarded_precision,
    precision,
    resolve_precision,
    significant_digits,
    ulp_distance,
)
from .quadrature import integrate_halfline, integrate_weighted
from .special import gamma, half_gamma_sequence


class PrecisionTests(SimpleTestCase):
    def test_default_precision_comes_from_settings(self):
        self.assertEqual(resolve_precision(), 256)

    @override_settings(LABORATORY_SETTINGS={"PRECISION_BITS": 128})
    def test_settings_override_default_precision(self):
        self.assertEqual(resolve_precision(), 128)
        self.assertEqual(resolve_precision(512), 512)

    def test_precision_below_minimum_is_rejected(self):
        with self.assertRaises(DomainError):
            resolve_precision(32)

    def test_precision_context_restores_previous_width(self):
        """Test that leaving a precision block restores the caller's width."""
        before = mp.prec
        with precision(512):
            self.assertEqual(mp.prec, 512)
        self.assertEqual(mp.prec, before)

    def test_fd_step_policy(self):
        self.assertEqual(fd_step(256), mpf(2) ** -32)
        self.assertEqual(fd_step(512), mpf(2) ** -64)

    def test_guard_bits_grow_with_index(self):
        self.assertEqual(guarded_precision(256, 4), 256)
        self.assertEqual(guarded_precision(256, 20), 64 + 24 * 20)

    def test_significant_digits(self):
        self.assertEqual(significant_digits(256), 78)
        self.assertEqual(significant_digits(64), 20)

    def test_agreed_bits_of_equal_values_is_infinite(self):
        self.assertEqual(agreed_bits(mpf(3), mpf(3)), mp.inf)

    def test_precision_exhausted_message_names_precision(self):
        error = PrecisionExhaustedError("a_3^2 <= 0", precision_bits=128)
        self.assertIn("128 bits", str(error))
        self.assertEqual(error.exit_status, 3)

    def test_default_tolerances(self):
        tolerances = default_tolerances()
        self.assertEqual(tolerances["route"], "1e-25")
        self.assertEqual(tolerances["toda"], "1e-12")
        self.assertEqual(lab_setting("GUARD_BITS_PER_INDEX"), 24)


class GammaTests(SimpleTestCase):
    def test_spot_values(self):
        with precision(256):
            self.assertEqual(gamma(1), 1)
            self.assertLess(abs(gamma("0.5") - mp.sqrt(mp.pi)), mpf("1e-70"))
            self.assertLess(
                abs(gamma("2.5") - 3 * mp.sqrt(mp.pi) / 4), mpf("1e-70")
            )

    def test_recursion_within_sixteen_ulps(self):
        """Test that gamma(s + 1) = s gamma(s) holds to sixteen ulps."""
        for s in ("0.25", "1.5", "7", "12.75", "50"):
            with precision(256):
                s = mpf(s)
                left = gamma(s + 1)
                right = s * gamma(s)
                self.assertLessEqual(ulp_distance(left, right, 256), 16)

    def test_nonpositive_argument_is_rejected(self):
        for s in (0, -1.5):
            with self.assertRaises(DomainError):
                gamma(s)

    def test_half_gamma_sequence_matches_direct_evaluation(self):
        with precision(256):
            values = half_gamma_sequence(1, 6)
            for j, value in enumerate(values):
                expected = mp.gamma(mpf(j + 2) / 2) / 2
                self.assertLess(abs(value - expected), mpf("1e-70") * expected)


class QuadratureTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_closed_form_integrals(self):
        with precision(256):
            root_pi = mp.sqrt(mp.pi)
            self.assertLess(abs(integrate_halfline(0, 0) - root_pi / 2), mpf("1e-35"))
            self.assertLess(abs(integrate_halfline(1, 0) - mpf(1) / 2), mpf("1e-35"))
            self.assertLess(abs(integrate_halfline(2, 0) - root_pi / 4), mpf("1e-35"))

    def test_agrees_with_gamma(self):
        for s in ("0", "0.5", "1", "2", "3.7"):
            with precision(256):
                s = mpf(s)
                expected = mp.gamma((s + 1) / 2) / 2
                self.assertLess(abs(integrate_halfline(s, 0) - expected), mpf("1e-35"))

    def test_weighted_integral_with_shifted_exponential(self):
        # x * exp(-x^2 + t x) integrates to 1/2 + t/2 * integral of exp(...)
        with precision(256):
            t = mpf(1)
            first = integrate_weighted(lambda x: x, 0, t)
            zeroth = integrate_halfline(0, t)
            self.assertLess(abs(first - (1 + t * zeroth) / 2), mpf("1e-35"))

    def test_divergent_exponent_is_rejected(self):
        with self.assertRaises(DivergentIntegralError):
            integrate_halfline(-1, 0)
        with self.assertRaises(DomainError):
            integrate_halfline("-1.5", 0)

    def test_missed_tolerance_raises_with_estimate(self):
        """Test that an unmet quadrature tolerance reports the achieved estimate."""
        with mock.patch.object(mp, "quad", return_value=(mpf(1), mpf("1e-5"))):
            with self.assertRaises(ConvergenceError) as context:
                integrate_halfline(0, 0)
        self.assertEqual(context.exception.estimate, mpf("1e-5"))
