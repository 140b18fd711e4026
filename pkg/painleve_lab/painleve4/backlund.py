"""
Bäcklund transformations of the fourth Painlevé equation and the ladder
they induce on the orbit solutions q_n.
"""

import logging

from mpmath import mp

from discrete_system.orbit import run_discrete
from numerics.exceptions import DomainError, LadderSingularityError, PoleError
from numerics.precision import (
    fd_step,
    precision,
    resolve_precision,
    singular_threshold,
    to_ext,
)
from toda.flow import xn_derivative

from .equation import P4Params, P4Point, laguerre_p4_params, q_and_slope

logger = logging.getLogger(__name__)

SIGNS = (1, -1)


def _check_signs(eps, mu):
    if eps not in SIGNS or mu not in SIGNS:
        raise DomainError(f"eps and mu must be +1 or -1, got ({eps}, {mu})")


def _root_minus_two_b(p4_params):
    if p4_params.B > 0:
        raise DomainError(
            f"Bäcklund map needs B <= 0, got B = {mp.nstr(p4_params.B, 15)}"
        )
    return mp.sqrt(-2 * p4_params.B)


def backlund_params(p4_params, eps, mu, precision_bits=None):
    """
    Parameters of the transformed solution:

        A~ = (2 mu - 2A + 3 mu eps sqrt(-2B))/4
        B~ = -(1 + A mu + eps sqrt(-2B)/2)^2 / 2
    """
    _check_signs(eps, mu)
    with precision(precision_bits):
        A = p4_params.A
        root = _root_minus_two_b(p4_params)
        return P4Params(
            (2 * mu - 2 * A + 3 * mu * eps * root) / 4,
            -((1 + A * mu + eps * root / 2) ** 2) / 2,
        )


def riccati_degenerate_signs(alpha):
    """
    Sign pairs (eps, mu) for which T_{eps,mu} sends the Riccati member q_0 to
    zero: mu = -1 with eps sqrt(-2B) = 2 alpha, so both eps when alpha = 0.
    """
    alpha = to_ext(alpha)
    if alpha == 0:
        return ((1, -1), (-1, -1))
    return ((1 if alpha > 0 else -1, -1),)


def backlund(q, q1, z, p4_params, eps, mu, precision_bits=None):
    """
    Apply T_{eps,mu} to a solution value (q, q') at z.

    Returns (q~, P4Params) with q~ = (q' - mu q^2 - 2 mu z q - eps sqrt(-2B))/(2 mu q).
    """
    _check_signs(eps, mu)
    with precision(precision_bits):
        q, q1, z = to_ext(q), to_ext(q1), to_ext(z)
        root = _root_minus_two_b(p4_params)
        if q == 0:
            raise PoleError(f"Bäcklund map undefined at q = 0 (z={mp.nstr(z, 15)})")
        value = (q1 - mu * q**2 - 2 * mu * z * q - eps * root) / (2 * mu * q)
        return value, backlund_params(p4_params, eps, mu, precision_bits)


def backlund_point(params, n, z, eps, mu, h=None, precision_bits=None):
    """
    P4Point of T_{eps,mu} q_n at z, with both derivatives of the transformed
    solution taken by central differences of step h in z.
    """
    bits = resolve_precision(precision_bits)
    with precision(bits):
        z = to_ext(z)
        h = fd_step(bits) if h is None else to_ext(h)
        source = laguerre_p4_params(n, params.alpha)
        values = []
        for offset in (-h, 0, h):
            q, q1 = q_and_slope(params, n, z + offset, bits)
            value, target = backlund(q, q1, z + offset, source, eps, mu, bits)
            values.append(value)
        behind, centre, ahead = values
        return P4Point(
            z=z,
            q=centre,
            q1=(ahead - behind) / (2 * h),
            q2=(ahead - 2 * centre + behind) / h**2,
            params=target,
        )


def _ladder_quotient(numerator, denominator, label, bits):
    if abs(denominator) < singular_threshold(bits):
        raise LadderSingularityError(f"{label}: vanishing denominator")
    return numerator / denominator


def ladder_up(q, q1, z, n, alpha, precision_bits=None):
    """
    q_{n+1} from (q_n, q_n'):

        (2a + 2zq + q^2 - q')(2a - 2zq - q^2 + q') / (2q (q^2 + 2zq - q' - 4 - 4n - 2a))
    """
    bits = resolve_precision(precision_bits)
    with precision(bits):
        q, q1, z, alpha = to_ext(q), to_ext(q1), to_ext(z), to_ext(alpha)
        core = 2 * z * q + q**2 - q1
        numerator = (2 * alpha + core) * (2 * alpha - core)
        denominator = 2 * q * (core - 4 - 4 * n - 2 * alpha)
        return _ladder_quotient(numerator, denominator, f"ladder_up at n={n}", bits)


def ladder_down(q, q1, z, n, alpha, precision_bits=None):
    """
    q_{n-1} from (q_n, q_n'):

        -(q' + q^2 + 2zq - 2a)(q' + q^2 + 2zq + 2a) / (2q (q' + q^2 + 2zq - 2(2n + a)))

    At n = 0 the first factor is the Riccati expression and there is no q_{-1};
    the quotient is still evaluated, after a warning.
    """
    bits = resolve_precision(precision_bits)
    if n == 0:
        # On the orbit both factors vanish here and the quotient is singular
        logger.warning("ladder_down at n=0 has no orbit counterpart")
    with precision(bits):
        q, q1, z, alpha = to_ext(q), to_ext(q1), to_ext(z), to_ext(alpha)
        core = q1 + q**2 + 2 * z * q
        numerator = -(core - 2 * alpha) * (core + 2 * alpha)
        denominator = 2 * q * (core - 2 * (2 * n + alpha))
        return _ladder_quotient(numerator, denominator, f"ladder_down at n={n}", bits)


def relation_E_check(params, n, z, precision_bits=None, perturb_y=0):
    """
    max(|ladder_up(q_n) - q_{n+1}|, |ladder_down(q_n) - q_{n-1}|) at t = 2z,
    with q_k = -sqrt(2)/x_k read off the orbit. ``perturb_y`` shifts y_n
    before q_n' is formed.
    """
    if n < 1:
        raise DomainError(f"relation E needs n >= 1, got {n}")
    bits = resolve_precision(precision_bits)
    with precision(bits):
        z = to_ext(z)
        t = 2 * z
        states, _ = run_discrete(params.with_t(t), n + 1, bits)
        root_two = mp.sqrt(2)
        q = [-root_two / state.x for state in states]
        x, y = states[n].x, states[n].y + to_ext(perturb_y)
        q1 = 2 * root_two * xn_derivative(x, y, t, bits) / x**2
        alpha = params.alpha
        up = ladder_up(q[n], q1, z, n, alpha, bits)
        down = ladder_down(q[n], q1, z, n, alpha, bits)
        return max(abs(up - q[n + 1]), abs(down - q[n - 1]))

