"""
Verification suites run by the ``verify`` command.

Each suite maps a validated RunConfig and one grid point t to a list of
Check rows. With ``config.fault`` set, the suite perturbs one coefficient or
value by FAULT_DELTA so the harness can be seen to fail.
"""

import dataclasses
import logging
from dataclasses import dataclass

from mpmath import mpf

from freud.dpi import dpi_f2_residual
from freud.relations import freud_backlund_link, freud_cross_check, freud_p4_point
from ladder.operators import verify_conditions, w_equals_Rn_check
from moments.hankel import hankel_route
from numerics.precision import precision
from painleve4.backlund import (
    backlund_point,
    relation_E_check,
    riccati_degenerate_signs,
)
from painleve4.equation import p4_residual, q_and_slope, q_from_orbit, riccati_residual
from toda.flow import toda_residuals, xn_ode_residual
from toda.integrate import toda_integrate

logger = logging.getLogger(__name__)

FAULT_DELTA = mpf("1e-8")

BACKLUND_SIGNS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class Check:
    suite: str
    identity: str
    n: int
    t: mpf
    z: mpf
    residual: mpf
    tolerance: mpf

    @property
    def passed(self):
        return abs(self.residual) <= self.tolerance


def _fault(config):
    return FAULT_DELTA if config.fault else 0


def _half(t, bits):
    with precision(bits):
        return t / 2


def toda_suite(config, t):
    """Toda equations on the Hankel route and the second-order equation for x_n."""
    params = config.params(t)
    bits = config.precision_bits
    perturb = ("a2", 1, FAULT_DELTA) if config.fault else None
    report = toda_residuals(params, config.n_max, [t], config.h, bits, perturb)
    tolerance = config.tolerances["toda"]
    checks = []
    for residual in report.residuals:
        for identity, value in (("toda_a2", residual.r1), ("toda_b", residual.r2)):
            if value is not None:
                checks.append(
                    Check("toda", identity, residual.n, t, None, value, tolerance)
                )
    tolerance = config.tolerances["ode"]
    for n in range(config.n_max + 1):
        value = xn_ode_residual(params, n, t, config.h, bits)
        checks.append(Check("toda", "xn_ode", n, t, None, value, tolerance))
    return checks


def p4_suite(config, t):
    params = config.params(t)
    bits = config.precision_bits
    z = _half(t, bits)
    tolerance = config.tolerances["p4"]
    checks = []
    for n in range(config.n_max + 1):
        point = q_from_orbit(params, n, z, config.h, bits)
        if n == 0:
            point = dataclasses.replace(point, q=point.q + _fault(config))
        value = p4_residual(point, bits)
        checks.append(Check("p4", "p4_orbit", n, t, z, value, tolerance))
    return checks


def riccati_suite(config, t):
    params = config.params(t)
    bits = config.precision_bits
    z = _half(t, bits)
    q, q1 = q_and_slope(params, 0, z, bits)
    with precision(bits):
        q = q + _fault(config)
    value = riccati_residual(q, q1, z, params.alpha, bits)
    return [Check("riccati", "riccati", 0, t, z, value, config.tolerances["riccati"])]


def ladder_suite(config, t):
    """Compatibility conditions of the ladder operators (alpha > 0)."""
    params = config.params(t)
    bits = config.precision_bits
    coeffs = hankel_route(params, config.n_max + 1, bits)
    if config.fault:
        coeffs = coeffs.perturbed("a2", 1, FAULT_DELTA)
    tolerance = config.tolerances["cond"]
    rows = verify_conditions(coeffs, n_max=config.n_max, precision_bits=bits)
    return [
        Check("ladder", row.identity, row.n, t, None, row.residual, tolerance)
        for row in rows
    ]


def backlund_suite(config, t):
    """Bäcklund images of q_n and the ladder relation between neighbours."""
    params = config.params(t)
    bits = config.precision_bits
    z = _half(t, bits)
    degenerate = riccati_degenerate_signs(params.alpha)
    checks = []
    tolerance = config.tolerances["p4"]
    for n in range(config.n_max + 1):
        for eps, mu in BACKLUND_SIGNS:
            if n == 0 and (eps, mu) in degenerate:
                logger.warning(
                    "skipping T_{%+d,%+d} at n=0, it sends q_0 to zero", eps, mu
                )
                continue
            point = backlund_point(params, n, z, eps, mu, config.h, bits)
            identity = f"backlund_{eps:+d}{mu:+d}"
            value = p4_residual(point, bits)
            checks.append(Check("backlund", identity, n, t, z, value, tolerance))
    tolerance = config.tolerances["ladder"]
    for n in range(1, config.n_max + 1):
        perturb = _fault(config) if n == 1 else 0
        value = relation_E_check(params, n, z, bits, perturb_y=perturb)
        checks.append(Check("backlund", "relation_E", n, t, z, value, tolerance))
    return checks


def dpi_suite(config, t):
    """The dPI flow in t for the Freud coefficients."""
    bits = config.precision_bits
    tolerance = config.tolerances["toda"]
    checks = []
    for n in range(1, config.n_max + 1):
        perturb = (2, FAULT_DELTA) if config.fault and n == 1 else None
        value = dpi_f2_residual(config.alpha, t, n, config.h, bits, perturb)
        checks.append(Check("dpi", "dpi_flow", n, t, None, value, tolerance))
    return checks


def cross_suite(config, t):
    """Freud to Laguerre relations, the P_IV maps and the Bäcklund link."""
    bits = config.precision_bits
    perturb = (1, FAULT_DELTA) if config.fault else None
    tolerance = config.tolerances["route"]
    rows = freud_cross_check(config.alpha, t, config.n_max, bits, perturb)
    checks = [
        Check("cross", row.identity, row.n, t, None, row.residual, tolerance)
        for row in rows
    ]
    z = _half(t, bits)
    tolerance = config.tolerances["p4"]
    for n in range(1, config.n_max + 1):
        point = freud_p4_point(config.alpha, n, z, config.h, bits)
        value = p4_residual(point, bits)
        checks.append(Check("cross", "freud_p4", n, t, z, value, tolerance))
    tolerance = config.tolerances["fd"]
    for variant in ("rel1", "rel2"):
        # rel1 has no Bäcklund image at n = 0
        first = 1 if variant == "rel1" else 0
        for n in range(first, config.n_max + 1):
            link = freud_backlund_link(config.alpha, n, z, variant, config.h, bits)
            f2_difference, q_difference = link.differences()
            checks.append(
                Check("cross", f"{variant}_f2", n, t, z, f2_difference, tolerance)
            )
            checks.append(
                Check("cross", f"{variant}_q", n, t, z, q_difference, tolerance)
            )
    return checks


def w_suite(config, t):
    """R_n against alpha times the quadrature of p_n^2 y^(alpha-1) w."""
    params = config.params(t)
    bits = config.precision_bits
    tolerance = config.tolerances["w"]
    checks = []
    for n in range(config.n_max + 1):
        lhs, rhs = w_equals_Rn_check(params, n, bits)
        with precision(bits):
            value = lhs + _fault(config) - rhs
        checks.append(Check("w", "w_equals_R", n, t, None, value, tolerance))
    return checks


def integrate_suite(config):
    """Integrate the Toda flow across the t grid and compare with the Hankel route."""
    bits = config.precision_bits
    t0, t1 = config.t_grid[0], config.t_grid[-1]
    params = config.params(t0)
    tolerance = config.tolerances["integrate"]
    with precision(bits):
        step_tolerance = tolerance / 10000
    trajectory = toda_integrate(params, config.n_max, t0, t1, step_tolerance, bits)
    endpoint = trajectory[-1]
    reference = hankel_route(params.with_t(t1), config.n_max, bits)
    checks = []
    with precision(bits):
        for n in range(config.n_max + 1):
            value = endpoint.b[n] - reference.b[n]
            if n == 0:
                value += _fault(config)
            checks.append(Check("integrate", "toda_b", n, t1, None, value, tolerance))
            if n:
                value = endpoint.a2[n] - reference.a2[n]
                checks.append(
                    Check("integrate", "toda_a2", n, t1, None, value, tolerance)
                )
    return checks


POINT_SUITES = {
    "toda": toda_suite,
    "p4": p4_suite,
    "riccati": riccati_suite,
    "ladder": ladder_suite,
    "backlund": backlund_suite,
    "dpi": dpi_suite,
    "cross": cross_suite,
    "w": w_suite,
}

# Identities asserted only for alpha > 0
POSITIVE_ALPHA_SUITES = ("ladder", "w")

SUITES = tuple(POINT_SUITES) + ("integrate", "all")


def suites_for(name, alpha):
    """Point suites selected by ``--suite``; ``all`` leaves out ``integrate``."""
    if name == "integrate":
        return []
    if name != "all":
        return [name]
    selected = []
    for suite in POINT_SUITES:
        if suite in POSITIVE_ALPHA_SUITES and not alpha > 0:
            logger.warning("skipping the %s suite, it needs alpha > 0", suite)
            continue
        selected.append(suite)
    return selected


def run_point(task):
    """Run the named suites at one grid point; picklable for worker pools."""
    names, config, t = task
    checks = []
    for name in names:
        checks.extend(POINT_SUITES[name](config, t))
    return checks
