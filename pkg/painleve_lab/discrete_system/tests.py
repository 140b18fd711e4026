from unittest import mock

from django.core.cache import cache
from django.test import SimpleTestCase
from mpmath import mp, mpf

from moments.hankel import hankel_route
from moments.tables import WeightParams
from numerics.exceptions import DomainError, SingularOrbitError
from numerics.precision import precision

from .orbit import (
    initial_state,
    orbit_state,
    route_agreement,
    run_discrete,
    stable_range,
)


class InitialStateTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_closed_form_initial_state(self):
        with precision(256):
            state = initial_state(WeightParams(1, 0))
            self.assertLess(abs(state.x + mp.sqrt(2) / mp.sqrt(mp.pi)), mpf("1e-30"))
            self.assertEqual(state.y, mpf("-0.5"))
            self.assertLess(abs(state.b(0) - mp.sqrt(mp.pi) / 2), mpf("1e-30"))

    def test_initial_y_is_minus_half_alpha(self):
        """Test that y_0 = -alpha/2 for every t."""
        for alpha in ("0.5", "2.5"):
            state = initial_state(WeightParams(alpha, 1))
            self.assertEqual(state.y, -mpf(alpha) / 2)
            self.assertEqual(state.y + state.z, 0)


class RunDiscreteTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_first_step_closed_form(self):
        with precision(256):
            states, coeffs = run_discrete(WeightParams(1, 0), 1)
            self.assertLess(abs(states[1].y - (mpf(1) / 2 - mp.pi / 2)), mpf("1e-30"))
            self.assertLess(abs(coeffs.a2[1] - (1 - mp.pi / 4)), mpf("1e-30"))
            self.assertEqual(coeffs.route, "discrete")
            self.assertEqual(states[1].z, mpf("1.5"))

    def test_q_matches_ladder_coefficient(self):
        """Test that q_0 at alpha = 1, t = 0 equals sqrt(pi)."""
        with precision(256):
            state = orbit_state(WeightParams(1, 0), 0)
            self.assertLess(abs(state.q() - mp.sqrt(mp.pi)), mpf("1e-30"))

    def test_negative_n_max_is_rejected(self):
        with self.assertRaises(DomainError):
            run_discrete(WeightParams(1, 0), -1)

    def test_singular_orbit_is_reported(self):
        with mock.patch(
            "discrete_system.orbit.singular_threshold", return_value=mpf(10) ** 10
        ):
            with self.assertRaises(SingularOrbitError):
                run_discrete(WeightParams(1, 0), 3)

    def test_y_matches_hankel_coefficients(self):
        params = WeightParams("0.5", 1)
        states, _ = run_discrete(params, 10)
        reference = hankel_route(params, 10)
        with precision(256):
            for n in range(1, 11):
                expected = 2 * reference.a2[n] - n - params.alpha / 2
                self.assertLess(abs(states[n].y - expected), mpf("1e-25"))


class RouteAgreementTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_routes_agree_to_route_tolerance(self):
        for alpha in ("0.5", "1", "2.5"):
            for t in ("-2", "0", "1", "3"):
                rows = route_agreement(WeightParams(alpha, t), 20)
                self.assertEqual(len(rows), 21)
                for row in rows:
                    self.assertLessEqual(
                        row["b_diff"], mpf("1e-25"), (alpha, t, row["n"])
                    )
                    if row["n"]:
                        self.assertLessEqual(
                            row["a2_diff"], mpf("1e-25"), (alpha, t, row["n"])
                        )

    def test_a2_columns_empty_at_n_zero(self):
        rows = route_agreement(WeightParams(1, 0), 2)
        self.assertIsNone(rows[0]["a2_diff"])
        self.assertIsNotNone(rows[1]["a2_diff"])

    def test_more_precision_never_shrinks_stable_range(self):
        """Test that extra bits only extend the range where the routes agree."""
        params = WeightParams(1, 0)
        ranges = [stable_range(params, 20, bits) for bits in (128, 256, 512)]
        self.assertLessEqual(ranges[0], ranges[1])
        self.assertLessEqual(ranges[1], ranges[2])
        self.assertGreaterEqual(ranges[0], 0)
