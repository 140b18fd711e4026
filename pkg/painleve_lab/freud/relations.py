"""
Links between the Freud coefficients and the semi-classical Laguerre side.

Under x -> x^2 the Freud weight at alpha maps to the Laguerre weights at
alpha and alpha + 1, which gives

    (a_n^alpha)^2 = A_{2n}^2 A_{2n-1}^2        b_n^alpha = A_{2n}^2 + A_{2n+1}^2
    (a_n^{alpha+1})^2 = A_{2n}^2 A_{2n+1}^2    b_n^{alpha+1} = A_{2n+2}^2 + A_{2n+1}^2

and f(z) = -2 A_n^2(2z) solves the fourth Painlevé equation.
"""

import logging
from dataclasses import dataclass

from mpmath import mp, mpf

from moments.hankel import hankel_route
from numerics.exceptions import DomainError
from numerics.precision import fd_step, precision, resolve_precision, to_ext
from painleve4.backlund import backlund
from painleve4.equation import P4Params, P4Point, laguerre_p4_params

from .dpi import dpi_run, weight_params

logger = logging.getLogger(__name__)

VARIANTS = ("rel1", "rel2")

CROSS_IDENTITIES = ("a2_alpha", "b_alpha", "a2_shifted", "b_shifted")


@dataclass(frozen=True)
class CrossResidual:
    identity: str
    n: int
    residual: mpf


@dataclass(frozen=True)
class BacklundLink:
    z: mpf
    n: int
    variant: str
    f2_direct: mpf
    f2_backlund: mpf
    q_direct: mpf
    q_backlund: mpf

    def differences(self):
        """(|f2_direct - f2_backlund|, |q_direct - q_backlund|), None when undefined."""
        if self.f2_backlund is None:
            return None, None
        return (
            abs(self.f2_direct - self.f2_backlund),
            abs(self.q_direct - self.q_backlund),
        )


def freud_cross_check(alpha, t, n_max, precision_bits=None, perturb=None):
    """
    Residuals of the four cross relations for n = 0..N.

    The product relations start at n = 1. ``perturb`` is an optional
    (index, delta) applied to the Freud table.

    Returns:
        List of CrossResidual ordered by n, then identity
    """
    if n_max < 0:
        raise DomainError(f"n_max must be nonnegative, got {n_max}")
    bits = resolve_precision(precision_bits)
    params = weight_params(alpha, t, bits)
    laguerre = hankel_route(params, max(n_max, 1), bits)
    shifted = hankel_route(params.shifted(), max(n_max, 1), bits)
    freud = dpi_run(params.alpha, params.t, 2 * n_max + 2, bits)
    if perturb is not None:
        freud = freud.perturbed(*perturb)
    rows = []
    with precision(bits):
        A2 = freud.A2
        for n in range(n_max + 1):
            residuals = {
                "b_alpha": laguerre.b[n] - (A2[2 * n] + A2[2 * n + 1]),
                "b_shifted": shifted.b[n] - (A2[2 * n + 2] + A2[2 * n + 1]),
            }
            if n >= 1:
                residuals["a2_alpha"] = laguerre.a2[n] - A2[2 * n] * A2[2 * n - 1]
                residuals["a2_shifted"] = shifted.a2[n] - A2[2 * n] * A2[2 * n + 1]
            for identity in CROSS_IDENTITIES:
                if identity in residuals:
                    rows.append(CrossResidual(identity, n, residuals[identity]))
    return rows


def freud_p4_map(n, alpha):
    """
    Parameters (A, B) of the equation solved by f(z) = -2 A_n^2(2z).

    Even n: (-(2 + n + 4 alpha)/2, -n^2/2). Odd n: (1/2 - n/2 + alpha,
    -(1 + n + 2 alpha)^2/2), which for n = 2m + 1 is (alpha - m, -2 (1 + m + alpha)^2).
    """
    if n < 1:
        raise DomainError(f"the Freud map needs n >= 1, got {n}")
    alpha = to_ext(alpha)
    if n % 2:
        return P4Params(
            mpf(1) / 2 - mpf(n) / 2 + alpha, -((1 + n + 2 * alpha) ** 2) / 2
        )
    return P4Params(-(2 + n + 4 * alpha) / 2, -mpf(n) ** 2 / 2)


def _freud_value_and_slope(alpha, n, z, bits):
    # f = -2 A_n^2(2z) and df/dz = -4 A_n^2 (A_{n+1}^2 - A_{n-1}^2)
    A2 = dpi_run(alpha, 2 * z, n + 1, bits).A2
    return -2 * A2[n], -4 * A2[n] * (A2[n + 1] - A2[n - 1])


def freud_p4_point(alpha, n, z, h=None, precision_bits=None):
    """
    P4Point for f(z) = -2 A_n^2(2z) with the analytic slope from the dPI flow
    and f'' by central differences of step h/2 in z.
    """
    if n < 1:
        raise DomainError(f"the Freud map needs n >= 1, got {n}")
    bits = resolve_precision(precision_bits)
    with precision(bits):
        z = to_ext(z)
        h = fd_step(bits) if h is None else to_ext(h)
        step = h / 2
        value, slope = _freud_value_and_slope(alpha, n, z, bits)
        _, ahead = _freud_value_and_slope(alpha, n, z + step, bits)
        _, behind = _freud_value_and_slope(alpha, n, z - step, bits)
        return P4Point(
            z=z,
            q=value,
            q1=slope,
            q2=(ahead - behind) / (2 * step),
            params=freud_p4_map(n, alpha),
        )


def _laguerre_value_and_slope(alpha, n, z, bits):
    A2 = dpi_run(alpha, 2 * z, 2 * n + 2, bits).A2
    # A_0^2 = 0 drops the lower product at n = 0
    lower = A2[2 * n] * A2[2 * n - 1] if n else mpf(0)
    value = -2 * z + 2 * (A2[2 * n] + A2[2 * n + 1])
    slope = -2 + 4 * (A2[2 * n + 2] * A2[2 * n + 1] - lower)
    return value, slope


def laguerre_q_point(alpha, n, z, h=None, precision_bits=None):
    """P4Point for q_n(z) = -2z + 2 b_n^alpha(2z) built from Freud data alone."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    bits = resolve_precision(precision_bits)
    with precision(bits):
        z = to_ext(z)
        h = fd_step(bits) if h is None else to_ext(h)
        step = h / 2
        value, slope = _laguerre_value_and_slope(alpha, n, z, bits)
        _, ahead = _laguerre_value_and_slope(alpha, n, z + step, bits)
        _, behind = _laguerre_value_and_slope(alpha, n, z - step, bits)
        return P4Point(
            z=z,
            q=value,
            q1=slope,
            q2=(ahead - behind) / (2 * step),
            params=laguerre_p4_params(n, alpha),
        )


def rel1_p4_params(n, alpha):
    """Parameters of f_1 = -2 A_{2n}^2, f_2 = -2 A_{2n+1}^2 and q_n^alpha."""
    return {
        "f1": freud_p4_map(2 * n, alpha),
        "f2": freud_p4_map(2 * n + 1, alpha),
        "q": laguerre_p4_params(n, alpha),
    }


def rel2_p4_params(n, alpha):
    """Parameters of f_1 = -2 A_{2n+2}^2, f_2 = -2 A_{2n+1}^2 and q_n^{alpha+1}."""
    return {
        "f1": freud_p4_map(2 * n + 2, alpha),
        "f2": freud_p4_map(2 * n + 1, alpha),
        "q": laguerre_p4_params(n, to_ext(alpha) + 1),
    }


def freud_backlund_link(alpha, n, z, variant="rel1", h=None, precision_bits=None):
    """
    Compare the Bäcklund image of f_1 with the Freud and Laguerre values.

    rel1: f_1 = -2 A_{2n}^2, f_2 = T_{1,-1} f_1 and q = -2z + 2 b_n^alpha.
    rel2: f_1 = -2 A_{2n+2}^2, f_2 = T_{-1,1} f_1 and q = -2z + 2 b_n^{alpha+1}.
    In both cases f_2 is compared with -2 A_{2n+1}^2 and q with -2z - f_1 - f_2.
    The slope of f_1 is a central difference of step h in t.

    Returns:
        BacklundLink; for rel1 at n = 0 (f_1 vanishes identically) the
        Bäcklund values are None

    Raises:
        PoleError: f_1 vanishes at a point with n >= 1
    """
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    bits = resolve_precision(precision_bits)
    with precision(bits):
        z = to_ext(z)
        t = 2 * z
        h = fd_step(bits) if h is None else to_ext(h)
        index = 2 * n if variant == "rel1" else 2 * n + 2
        centre = dpi_run(alpha, t, 2 * n + 2, bits).A2
        ahead = dpi_run(alpha, t + h, 2 * n + 2, bits).A2
        behind = dpi_run(alpha, t - h, 2 * n + 2, bits).A2

        params = weight_params(alpha, t, bits)
        laguerre = params if variant == "rel1" else params.shifted()
        b = hankel_route(laguerre, max(n, 1), bits).b[n]
        f2_direct = -2 * centre[2 * n + 1]
        q_direct = -2 * z + 2 * b

        if index == 0:
            logger.warning("rel1 at n=0 has f_1 = 0 and no Bäcklund image")
            return BacklundLink(z, n, variant, f2_direct, None, q_direct, None)

        f1 = -2 * centre[index]
        # dz = dt/2
        f1_slope = -2 * (ahead[index] - behind[index]) / h
        eps, mu = (1, -1) if variant == "rel1" else (-1, 1)
        source = freud_p4_map(index, alpha)
        f2_backlund, _ = backlund(f1, f1_slope, z, source, eps, mu, bits)
        q_backlund = -2 * z - f1 - f2_backlund
    logger.debug(
        "%s link at n=%d, z=%s: f2 diff %s",
        variant,
        n,
        mp.nstr(z, 10),
        mp.nstr(abs(f2_direct - f2_backlund), 5),
    )
    return BacklundLink(z, n, variant, f2_direct, f2_backlund, q_direct, q_backlund)
