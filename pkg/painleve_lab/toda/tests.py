from django.core.cache import cache
from django.test import SimpleTestCase
from mpmath import mp, mpf

from discrete_system.orbit import orbit_state, run_discrete
from moments.hankel import hankel_route
from moments.tables import WeightParams
from numerics.exceptions import DomainError
from numerics.precision import precision

from .flow import toda_residuals, xn_derivative, xn_ode_residual
from .integrate import toda_integrate


class XnDerivativeTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_closed_form_at_origin(self):
        with precision(256):
            state = orbit_state(WeightParams(1, 0), 0)
            expected = (4 / mp.pi - 2) / (2 * mp.sqrt(2))
            slope = xn_derivative(state.x, state.y, 0)
            self.assertLess(abs(slope - expected), mpf("1e-30"))

    def test_constructed_zero(self):
        with precision(256):
            x, t = mpf("0.7"), mpf("1.3")
            y = (mp.sqrt(2) * t * x - 2) / (4 * x**2)
            self.assertLess(abs(xn_derivative(x, y, t)), mpf("1e-70"))

    def test_matches_central_difference_of_orbit(self):
        params = WeightParams("2.5", 1)
        with precision(256):
            h = mpf(2) ** -32
            ahead = orbit_state(params.with_t(1 + h), 3)
            behind = orbit_state(params.with_t(1 - h), 3)
            state = orbit_state(params, 3)
            difference = (ahead.x - behind.x) / (2 * h)
            self.assertLess(
                abs(difference - xn_derivative(state.x, state.y, 1)), mpf("1e-15")
            )

    def test_y_increment_equals_scaled_derivative(self):
        """Test that the orbit step in y matches the derivative of x_n."""
        params = WeightParams("0.5", 1)
        with precision(256):
            states, _ = run_discrete(params, 3)
            for n in range(3):
                x, y = states[n].x, states[n].y
                slope = xn_derivative(x, y, 1)
                self.assertLess(
                    abs(states[n + 1].y - y - mp.sqrt(2) * slope / x**2), mpf("1e-60")
                )


class TodaResidualTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_residuals_vanish(self):
        report = toda_residuals(WeightParams(1, 0), 5, ["-1", "0", "1"])
        self.assertLessEqual(report.max_abs(), mpf("1e-12"))
        self.assertEqual(len(report.residuals), 3 * 6)

    def test_residual_shape(self):
        report = toda_residuals(WeightParams(1, 0), 2, [0])
        first, last = report.residuals[0], report.residuals[-1]
        self.assertIsNone(first.r1)
        self.assertIsNotNone(first.r2)
        self.assertIsNone(last.r2)
        self.assertIsNotNone(last.r1)

    def test_b0_slope_is_a1_squared(self):
        """Test the Toda residual at n = 1 and a_1^2 = 1 - pi/4 at t = 0."""
        report = toda_residuals(WeightParams(1, 0), 1, [0])
        with precision(256):
            self.assertLess(abs(report.residuals[0].r2), mpf("1e-12"))
            coeffs = hankel_route(WeightParams(1, 0), 1)
            self.assertLess(abs(coeffs.a2[1] - (1 - mp.pi / 4)), mpf("1e-30"))

    def test_halving_step_quarters_residual(self):
        params = WeightParams(1, "0.5")
        coarse = toda_residuals(params, 2, ["0.5"], h=mpf(2) ** -10)
        fine = toda_residuals(params, 2, ["0.5"], h=mpf(2) ** -11)
        ratio = abs(coarse.residuals[0].r2) / abs(fine.residuals[0].r2)
        self.assertGreater(ratio, 3.5)
        self.assertLess(ratio, 4.5)

    def test_perturbed_a2_shows_in_r2(self):
        report = toda_residuals(WeightParams(1, 0), 3, [0], perturb=("a2", 1, 1))
        self.assertGreater(abs(report.residuals[0].r2), mpf("0.99"))
        self.assertLess(abs(report.residuals[0].r2), mpf("1.01"))

    def test_perturbed_b_shows_in_r1(self):
        report = toda_residuals(WeightParams(1, 0), 3, [0], perturb=("b", 1, 1))
        self.assertGreater(abs(report.residuals[1].r1), mpf("0.1"))

    def test_n_max_must_be_positive(self):
        with self.assertRaises(DomainError):
            toda_residuals(WeightParams(1, 0), 0, [0])


class XnOdeTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_residual_vanishes_on_orbit(self):
        for alpha in ("1", "2.5"):
            for n in (0, 4, 10):
                for t in ("-2", "0", "3"):
                    residual = xn_ode_residual(WeightParams(alpha, t), n, t)
                    self.assertLessEqual(abs(residual), mpf("1e-12"), (alpha, n, t))

    def test_scaled_orbit_is_detected(self):
        """Test that a rescaled x_n leaves a visible residual."""
        residual = xn_ode_residual(WeightParams(1, 0), 0, 0, scale=mpf("1.01"))
        self.assertGreater(abs(residual), mpf("1e-4"))

    def test_halving_step_quarters_residual(self):
        params = WeightParams(1, "0.5")
        coarse = xn_ode_residual(params, 1, "0.5", h=mpf(2) ** -10)
        fine = xn_ode_residual(params, 1, "0.5", h=mpf(2) ** -11)
        ratio = abs(coarse) / abs(fine)
        self.assertGreater(ratio, 3.5)
        self.assertLess(ratio, 4.5)


class TodaIntegrationTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_endpoint_matches_hankel_route(self):
        params = WeightParams(1, 0)
        trajectory = toda_integrate(params, 3, 0, 1, mpf("1e-14"))
        endpoint = trajectory[-1]
        reference = hankel_route(params.with_t(1), 3)
        self.assertEqual(endpoint.params.t, 1)
        self.assertEqual(endpoint.route, "toda")
        for n in range(4):
            self.assertLess(abs(endpoint.b[n] - reference.b[n]), mpf("1e-10"))
            self.assertLess(abs(endpoint.a2[n] - reference.a2[n]), mpf("1e-10"))

    def test_zero_length_interval_returns_initial_data(self):
        params = WeightParams(1, 0)
        trajectory = toda_integrate(params, 2, "0.5", "0.5", mpf("1e-14"))
        self.assertEqual(len(trajectory), 1)
        reference = hankel_route(params.with_t("0.5"), 2)
        self.assertEqual(trajectory[0].b, reference.b)
        self.assertEqual(trajectory[0].a2, reference.a2)

    def test_reversed_interval_is_rejected(self):
        with self.assertRaises(DomainError):
            toda_integrate(WeightParams(1, 0), 2, 1, 0, mpf("1e-14"))
