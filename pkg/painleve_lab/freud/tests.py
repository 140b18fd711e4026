from unittest import mock

from django.core.cache import cache
from django.test import SimpleTestCase
from mpmath import mp, mpf

from moments.hankel import moment_table
from moments.tables import WeightParams
from numerics.exceptions import DomainError, PrecisionExhaustedError
from numerics.precision import precision
from painleve4.backlund import backlund_params
from painleve4.equation import p4_residual, q_from_orbit

from .dpi import dpi_f2_residual, dpi_run, freud_hankel_route, freud_moment
from .relations import (
    freud_backlund_link,
    freud_cross_check,
    freud_p4_map,
    freud_p4_point,
    laguerre_q_point,
    rel1_p4_params,
    rel2_p4_params,
)


class DpiRunTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_closed_form_values(self):
        table = dpi_run(1, 0, 4)
        with precision(256):
            root_pi = mp.sqrt(mp.pi)
            self.assertEqual(table.A2[0], 0)
            self.assertLess(abs(table.A2[1] - root_pi / 2), mpf("1e-30"))
            expected = 2 / root_pi - root_pi / 2
            self.assertLess(abs(table.A2[2] - expected), mpf("1e-30"))

    def test_coefficients_stay_positive(self):
        for alpha in ("-0.5", "0.5", "2.5"):
            for t in ("-2", "0", "3"):
                table = dpi_run(alpha, t, 24)
                self.assertTrue(all(value > 0 for value in table.A2[1:]), (alpha, t))

    def test_table_is_cached(self):
        """A repeated run is served from the cache without recomputing moments."""
        first = dpi_run(1, 0, 6)
        with mock.patch("freud.dpi.base_moments", side_effect=AssertionError):
            self.assertEqual(dpi_run(1, 0, 6), first)

    def test_breakdown_is_precision_exhaustion(self):
        """Test that a collapsing A_n^2 stops the run instead of printing noise."""
        with mock.patch("freud.dpi.singular_threshold", return_value=mpf(10)):
            with self.assertRaises(PrecisionExhaustedError):
                dpi_run(1, 0, 4)

    def test_invalid_alpha_is_rejected(self):
        with self.assertRaises(DomainError):
            dpi_run(-1, 0, 4)


class FreudMomentTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_even_moments_are_laguerre_moments(self):
        for alpha, t in (("1", "0"), ("0.5", "1"), ("2.5", "-1")):
            params = WeightParams(alpha, t)
            mu = moment_table(params, 4, 256).mu
            for k in range(4):
                value = freud_moment(alpha, t, 2 * k)
                self.assertLess(abs(value - mu[k]), mpf("1e-20"), (alpha, t, k))

    def test_odd_moments_vanish(self):
        self.assertEqual(freud_moment(1, "0.5", 3), 0)


class FreudHankelTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_hankel_route_matches_dpi(self):
        for alpha in ("0.5", "1"):
            for t in ("-1", "0", "1.5"):
                hankel = freud_hankel_route(alpha, t, 12)
                orbit = dpi_run(alpha, t, 12)
                for n in range(1, 13):
                    difference = abs(hankel.A2[n] - orbit.A2[n])
                    self.assertLess(difference, mpf("1e-25"), (alpha, t, n))


class FlowTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_residual_vanishes(self):
        for alpha, t, n in (("1", "0", 1), ("0.5", "1.5", 3), ("2.5", "-1", 6)):
            residual = dpi_f2_residual(alpha, t, n)
            self.assertLessEqual(abs(residual), mpf("1e-12"), (alpha, t, n))

    def test_halving_step_quarters_residual(self):
        coarse = dpi_f2_residual("0.5", "1.5", 3, h=mpf(2) ** -10)
        fine = dpi_f2_residual("0.5", "1.5", 3, h=mpf(2) ** -11)
        ratio = abs(coarse) / abs(fine)
        self.assertGreater(ratio, 3.5)
        self.assertLess(ratio, 4.5)

    def test_perturbed_coefficient_shifts_residual(self):
        delta = mpf("1e-8")
        residual = dpi_f2_residual(1, 0, 1, perturb=(2, delta))
        with precision(256):
            shift = mp.sqrt(mp.pi) / 2 * delta
            self.assertLess(abs(residual + shift), mpf("1e-15"))

    def test_index_zero_is_rejected(self):
        with self.assertRaises(DomainError):
            dpi_f2_residual(1, 0, 0)


class CrossRelationTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_relations_hold(self):
        for alpha in ("0.5", "1", "2.5"):
            for t in ("-1", "0", "2"):
                for row in freud_cross_check(alpha, t, 10):
                    self.assertLessEqual(
                        abs(row.residual), mpf("1e-25"), (alpha, t, row.identity, row.n)
                    )

    def test_identities_and_ranges(self):
        rows = freud_cross_check(1, 0, 2)
        covered = {}
        for row in rows:
            covered.setdefault(row.identity, []).append(row.n)
        self.assertEqual(covered["b_alpha"], [0, 1, 2])
        self.assertEqual(covered["a2_alpha"], [1, 2])

    def test_perturbed_coefficient_is_detected(self):
        rows = freud_cross_check(1, 0, 2, perturb=(3, mpf("1e-8")))
        worst = max(abs(row.residual) for row in rows)
        self.assertGreater(worst, mpf("1e-9"))


class FreudP4Tests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_parameter_map_spot_values(self):
        self.assertEqual(freud_p4_map(2, 1).as_tuple(), (-4, -2))
        self.assertEqual(freud_p4_map(1, 1).as_tuple(), (1, -8))

    def test_odd_conventions_coincide(self):
        """Test the P_IV parameters of the odd-index map."""
        for m in range(4):
            params = freud_p4_map(2 * m + 1, "2.5")
            self.assertEqual(params.A, mpf("2.5") - m)
            self.assertEqual(params.B, -2 * (1 + m + mpf("2.5")) ** 2)

    def test_map_needs_positive_index(self):
        with self.assertRaises(DomainError):
            freud_p4_map(0, 1)

    def test_mapped_points_solve_p4(self):
        for alpha in ("0.5", "1"):
            for n in (1, 2, 3, 4):
                for z in ("-0.5", "0", "0.75"):
                    point = freud_p4_point(alpha, n, z)
                    self.assertLessEqual(
                        abs(p4_residual(point)), mpf("1e-12"), (alpha, n, z)
                    )

    def test_laguerre_point_from_freud_data(self):
        for alpha in ("0.5", "1"):
            for n in (0, 1, 3):
                point = laguerre_q_point(alpha, n, "0.25")
                reference = q_from_orbit(WeightParams(alpha, 0), n, "0.25")
                self.assertLess(abs(point.q - reference.q), mpf("1e-25"), (alpha, n))
                self.assertLess(abs(point.q1 - reference.q1), mpf("1e-25"), (alpha, n))
                self.assertLessEqual(abs(p4_residual(point)), mpf("1e-12"), (alpha, n))


class BacklundLinkTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def assertParamsEqual(self, first, second):
        with precision(256):
            self.assertLess(abs(first.A - second.A), mpf("1e-30"))
            self.assertLess(abs(first.B - second.B), mpf("1e-30"))

    def test_links_agree(self):
        cases = [("rel1", n) for n in (1, 2)] + [("rel2", n) for n in (0, 1, 2)]
        for alpha in ("0.5", "1"):
            for z in ("0", "0.4"):
                for variant, n in cases:
                    link = freud_backlund_link(alpha, n, z, variant)
                    f2_difference, q_difference = link.differences()
                    label = (alpha, z, variant, n)
                    self.assertLessEqual(f2_difference, mpf("1e-12"), label)
                    self.assertLessEqual(q_difference, mpf("1e-12"), label)

    def test_first_member_has_no_image(self):
        """Test that rel1 at n = 0 warns and returns no Bäcklund values."""
        with self.assertLogs("freud.relations", level="WARNING"):
            link = freud_backlund_link(1, 0, 0)
        self.assertIsNone(link.f2_backlund)
        self.assertEqual(link.differences(), (None, None))
        with precision(256):
            self.assertLess(abs(link.q_direct - mp.sqrt(mp.pi)), mpf("1e-30"))

    def test_unknown_variant_is_rejected(self):
        with self.assertRaises(DomainError):
            freud_backlund_link(1, 1, 0, "rel3")

    def test_parameters_follow_backlund_map(self):
        for alpha in ("0.5", "1", "2.5"):
            for n in (1, 2, 3):
                first = rel1_p4_params(n, alpha)
                source = first["f1"]
                self.assertParamsEqual(first["f2"], backlund_params(source, 1, -1))
                self.assertParamsEqual(first["q"], backlund_params(source, 1, 1))
                second = rel2_p4_params(n, alpha)
                source = second["f1"]
                self.assertParamsEqual(second["f2"], backlund_params(source, -1, 1))
                self.assertParamsEqual(second["q"], backlund_params(source, -1, -1))
