from django.core.cache import cache
from django.test import SimpleTestCase
from mpmath import mp, mpf

from moments.tables import WeightParams
from numerics.exceptions import DomainError, LadderSingularityError, PoleError
from numerics.precision import precision

from .backlund import (
    backlund,
    backlund_params,
    backlund_point,
    ladder_down,
    ladder_up,
    relation_E_check,
    riccati_degenerate_signs,
)
from .equation import (
    P4Params,
    P4Point,
    laguerre_p4_params,
    p4_residual,
    q_and_slope,
    q_from_orbit,
    riccati_residual,
)


class LaguerreP4Tests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_parameters(self):
        params = laguerre_p4_params(2, "0.5")
        self.assertEqual(params.A, mpf("5.5"))
        self.assertEqual(params.B, mpf("-0.5"))

    def test_closed_form_point(self):
        with precision(256):
            point = q_from_orbit(WeightParams(1, 0), 0, 0)
            self.assertLess(abs(point.q - mp.sqrt(mp.pi)), mpf("1e-30"))
            self.assertLess(abs(point.q1 - (2 - mp.pi)), mpf("1e-30"))
            self.assertEqual(point.params.as_tuple(), (2, -2))

    def test_residual_vanishes_on_orbit(self):
        for alpha in ("0.5", "1", "2.5"):
            for n in (0, 3, 10):
                for z in ("-1", "0", "0.5", "1.5"):
                    point = q_from_orbit(WeightParams(alpha, 0), n, z)
                    self.assertLessEqual(
                        abs(p4_residual(point)), mpf("1e-12"), (alpha, n, z)
                    )

    def test_wrong_parameters_are_detected(self):
        point = q_from_orbit(WeightParams(1, 0), 1, "0.5")
        shifted = P4Point(
            z=point.z, q=point.q, q1=point.q1, q2=point.q2, params=P4Params(5, -2)
        )
        self.assertGreater(abs(p4_residual(shifted)), mpf("1e-3"))

    def test_zero_q_is_a_pole(self):
        point = P4Point(z=0, q=mpf(0), q1=mpf(1), q2=mpf(0), params=P4Params(2, -2))
        with self.assertRaises(PoleError):
            p4_residual(point)


class RiccatiTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_spot_values(self):
        with precision(256):
            root_pi = mp.sqrt(mp.pi)
            residual = riccati_residual(root_pi, 2 - mp.pi, 0, 1)
            self.assertLess(abs(residual), mpf("1e-70"))
        self.assertEqual(riccati_residual(0, 0, 0, 0), 0)
        self.assertEqual(riccati_residual(1, 0, 0, 1), -1)

    def test_residual_vanishes_for_first_member(self):
        for alpha in ("0.5", "1", "2.5"):
            for z in ("-1", "0", "0.75"):
                q, q1 = q_and_slope(WeightParams(alpha, 0), 0, z)
                self.assertLess(
                    abs(riccati_residual(q, q1, z, alpha)), mpf("1e-25"), (alpha, z)
                )


class BacklundTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_parameter_map_spot_values(self):
        self.assertEqual(backlund_params(P4Params(2, -2), 1, 1).as_tuple(), (1, -8))
        self.assertEqual(backlund_params(P4Params(2, -2), -1, 1).as_tuple(), (-2, -2))

    def test_composed_parameter_maps(self):
        first = backlund_params(P4Params(2, -2), 1, 1)
        second = backlund_params(first, 1, -1)
        self.assertEqual(second.as_tuple(), (-4, -2))

    def test_positive_b_is_rejected(self):
        with self.assertRaises(DomainError):
            backlund_params(P4Params(2, 1), 1, 1)
        with self.assertRaises(DomainError):
            backlund(1, 0, 0, P4Params(2, -2), 2, 1)

    def test_zero_q_is_a_pole(self):
        with self.assertRaises(PoleError):
            backlund(0, 1, 0, P4Params(2, -2), 1, 1)

    def test_riccati_member_maps_to_reflection(self):
        with precision(256):
            z = mpf("0.5")
            q, q1 = q_and_slope(WeightParams(1, 0), 0, z)
            value, params = backlund(q, q1, z, P4Params(2, -2), 1, 1)
            self.assertLess(abs(value - (-q - 2 * z)), mpf("1e-60"))
            self.assertEqual(params.as_tuple(), (1, -8))

    def test_transformed_point_solves_p4(self):
        point = backlund_point(WeightParams(1, 0), 0, 0, 1, 1)
        self.assertEqual(point.params.as_tuple(), (1, -8))
        self.assertLessEqual(abs(p4_residual(point)), mpf("1e-12"))

    def test_transformed_points_of_higher_members_solve_p4(self):
        for eps, mu in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            point = backlund_point(WeightParams("2.5", 0), 1, "0.5", eps, mu)
            self.assertLessEqual(abs(p4_residual(point)), mpf("1e-12"), (eps, mu))

    def test_degenerate_signs_follow_alpha(self):
        self.assertEqual(riccati_degenerate_signs(1), ((1, -1),))
        self.assertEqual(riccati_degenerate_signs("-0.5"), ((-1, -1),))
        self.assertEqual(riccati_degenerate_signs(0), ((1, -1), (-1, -1)))

    def test_degenerate_signs_send_first_member_to_zero(self):
        """Degenerate pairs annihilate q_0; the other images still solve P_IV."""
        for alpha in ("-0.5", "0", "2.5"):
            params = WeightParams(alpha, 1)
            p4params = laguerre_p4_params(0, params.alpha)
            degenerate = riccati_degenerate_signs(params.alpha)
            with precision(256):
                z = mpf("0.5")
                q, q1 = q_and_slope(params, 0, z)
                for eps, mu in degenerate:
                    value, _ = backlund(q, q1, z, p4params, eps, mu)
                    self.assertLess(abs(value), mpf("1e-50"), (alpha, eps, mu))
            for eps, mu in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                if (eps, mu) in degenerate:
                    continue
                point = backlund_point(params, 0, "0.5", eps, mu)
                residual = p4_residual(point)
                self.assertLessEqual(abs(residual), mpf("1e-12"), (alpha, eps, mu))


class LadderRelationTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_ladder_up_from_first_member(self):
        with precision(256):
            root_pi = mp.sqrt(mp.pi)
            value = ladder_up(root_pi, 2 - mp.pi, 0, 0, 1)
            expected = q_from_orbit(WeightParams(1, 0), 1, 0).q
            self.assertLess(abs(value - expected), mpf("1e-30"))

    def test_ladder_down_to_first_member(self):
        with precision(256):
            q, q1 = q_and_slope(WeightParams(1, 0), 1, "0.3")
            expected, _ = q_and_slope(WeightParams(1, 0), 0, "0.3")
            value = ladder_down(q, q1, "0.3", 1, 1)
            self.assertLess(abs(value - expected), mpf("1e-30"))

    def test_constructed_degeneracy(self):
        self.assertEqual(ladder_up(1, 2, "0.5", 0, 0), 0)

    def test_ladder_down_at_zero_warns(self):
        with self.assertLogs("painleve4.backlund", level="WARNING"):
            self.assertEqual(ladder_down(1, 0, 0, 0, 1), mpf("-1.5"))

    def test_vanishing_denominator(self):
        # q^2 + 2zq - q' = 4 + 4n + 2 alpha
        with self.assertRaises(LadderSingularityError):
            ladder_up(2, -2, 0, 0, 1)

    def test_relation_vanishes_on_orbit(self):
        for alpha, n, z in (("1", 1, "0"), ("2.5", 3, "0.7"), ("0.5", 10, "-1")):
            value = relation_E_check(WeightParams(alpha, 0), n, z)
            self.assertLessEqual(value, mpf("1e-20"), (alpha, n, z))

    def test_perturbed_orbit_is_detected(self):
        value = relation_E_check(WeightParams(1, 0), 1, 0, perturb_y=mpf("1e-6"))
        self.assertGreater(value, mpf("1e-10"))

    def test_relation_needs_positive_index(self):
        with self.assertRaises(DomainError):
            relation_E_check(WeightParams(1, 0), 0, 0)
