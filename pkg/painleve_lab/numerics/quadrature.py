"""
Half-line quadrature oracle.

Used only to verify quantities computed by other routes, never to compute
recurrence coefficients.
"""

import logging

from mpmath import mp

from .exceptions import ConvergenceError, DivergentIntegralError
from .precision import precision, resolve_precision, to_ext

logger = logging.getLogger(__name__)


def quadrature_tolerance(precision_bits=None):
    """Default absolute tolerance 2^-(bits/2)."""
    bits = resolve_precision(precision_bits)
    return mp.ldexp(mp.mpf(1), -(bits // 2))


def integrate_on_halfline(integrand, split, tol, label="integral"):
    """
    Integrate over [0, split] and [split, inf) with tanh-sinh panels.

    Raises ConvergenceError carrying the summed error estimate when it
    exceeds ``tol``.
    """
    value, estimate = mp.quad(integrand, [0, split, mp.inf], error=True)
    if estimate > tol:
        logger.warning(
            "%s missed tolerance %s (estimate %s)",
            label,
            mp.nstr(tol, 5),
            mp.nstr(estimate, 5),
        )
        raise ConvergenceError(
            f"{label} did not converge: error estimate {mp.nstr(estimate, 5)} "
            f"exceeds tolerance {mp.nstr(tol, 5)}",
            estimate=estimate,
        )
    return value


def integrate_weighted(f, s, t, tol=None, precision_bits=None):
    """
    Integral of f(x) x^s exp(-x^2 + t x) over (0, inf).

    Args:
        f: Callable of one mpf argument, evaluated at the working precision
        s: Exponent, must exceed -1
        t: Linear exponential parameter
        tol: Absolute tolerance, defaults to 2^-(precision_bits/2)
        precision_bits: Working precision

    Returns:
        mpf value of the integral
    """
    bits = resolve_precision(precision_bits)
    with precision(bits):
        s = to_ext(s)
        t = to_ext(t)
        if not s > -1:
            raise DivergentIntegralError(
                f"integral diverges at the origin for s = {mp.nstr(s, 15)} <= -1"
            )
        tol = quadrature_tolerance(bits) if tol is None else to_ext(tol)
        split = max(mp.mpf(1), t)

        def integrand(x):
            if x == 0:
                return mp.mpf(0)
            return f(x) * x**s * mp.exp(-x * x + t * x)

        return integrate_on_halfline(
            integrand, split, tol, label=f"weighted integral (s={mp.nstr(s, 8)})"
        )


def integrate_halfline(s, t, tol=None, precision_bits=None):
    """Integral of x^s exp(-x^2 + t x) over (0, inf)."""
    return integrate_weighted(
        lambda x: 1, s, t, tol=tol, precision_bits=precision_bits
    )
