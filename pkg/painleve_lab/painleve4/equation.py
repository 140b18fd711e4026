"""
The fourth Painlevé equation

    q'' = q'^2/(2q) + 3/2 q^3 + 4 z q^2 + 2 (z^2 - A) q + B/q

and its realisation q_n(z) = -sqrt(2)/x_n(2z) on the discrete orbit, which
solves it with A = 1 + 2n + alpha and B = -2 alpha^2.
"""

from dataclasses import dataclass

from mpmath import mp, mpf

from discrete_system.orbit import orbit_state
from numerics.exceptions import DomainError, PoleError
from numerics.precision import fd_step, precision, resolve_precision, to_ext
from toda.flow import xn_derivative


@dataclass(frozen=True)
class P4Params:
    A: mpf
    B: mpf

    def __post_init__(self):
        object.__setattr__(self, "A", to_ext(self.A))
        object.__setattr__(self, "B", to_ext(self.B))

    def as_tuple(self):
        return (self.A, self.B)


@dataclass(frozen=True)
class P4Point:
    z: mpf
    q: mpf
    q1: mpf
    q2: mpf
    params: P4Params


def laguerre_p4_params(n, alpha):
    """(A, B) = (1 + 2n + alpha, -2 alpha^2)."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    alpha = to_ext(alpha)
    if not alpha > -1:
        raise DomainError(f"alpha must exceed -1, got {mp.nstr(alpha, 15)}")
    return P4Params(1 + 2 * n + alpha, -2 * alpha**2)


def q_and_slope(params, n, z, precision_bits=None):
    """
    Analytic (q_n, q_n') at z from the orbit at t = 2z.

    q = -sqrt(2)/x_n and dq/dz = 2 sqrt(2) x_n'/x_n^2.
    """
    bits = resolve_precision(precision_bits)
    with precision(bits):
        z = to_ext(z)
        t = 2 * z
        state = orbit_state(params.with_t(t), n, bits)
        if state.x == 0:
            raise PoleError(f"x_{n} vanishes at z={mp.nstr(z, 15)}")
        root_two = mp.sqrt(2)
        slope = xn_derivative(state.x, state.y, t, bits)
        return -root_two / state.x, 2 * root_two * slope / state.x**2


def q_from_orbit(params, n, z, h=None, precision_bits=None):
    """
    P4Point for q_n at z; q2 is the central difference of the analytic q1
    with step h/2 in z (h in t).
    """
    bits = resolve_precision(precision_bits)
    with precision(bits):
        z = to_ext(z)
        h = fd_step(bits) if h is None else to_ext(h)
        step = h / 2
        q, q1 = q_and_slope(params, n, z, bits)
        _, ahead = q_and_slope(params, n, z + step, bits)
        _, behind = q_and_slope(params, n, z - step, bits)
        return P4Point(
            z=z,
            q=q,
            q1=q1,
            q2=(ahead - behind) / (2 * step),
            params=laguerre_p4_params(n, params.alpha),
        )


def p4_rhs(q, q1, z, p4_params):
    if q == 0:
        raise PoleError(f"q vanishes at z={mp.nstr(z, 15)}")
    A, B = p4_params.as_tuple()
    return (
        q1**2 / (2 * q)
        + mpf(3) / 2 * q**3
        + 4 * z * q**2
        + 2 * (z**2 - A) * q
        + B / q
    )


def p4_residual(point, precision_bits=None):
    """q2 minus the right-hand side of the equation at the point."""
    with precision(precision_bits):
        return point.q2 - p4_rhs(point.q, point.q1, point.z, point.params)


def riccati_residual(q, q1, z, alpha, precision_bits=None):
    """q' + q^2 + 2 z q - 2 alpha, which vanishes for the n = 0 member."""
    with precision(precision_bits):
        q, q1, z, alpha = to_ext(q), to_ext(q1), to_ext(z), to_ext(alpha)
        return q1 + q**2 + 2 * z * q - 2 * alpha
