"""
t-derivatives of the recurrence coefficients and of the orbit.

    (a_n^2)' = a_n^2 (b_n - b_{n-1}),    b_n' = a_{n+1}^2 - a_n^2
"""

import logging
from dataclasses import dataclass, field

from mpmath import mp, mpf

from discrete_system.orbit import orbit_state
from moments.hankel import hankel_route
from numerics.exceptions import DomainError, PoleError
from numerics.precision import fd_step, precision, resolve_precision, to_ext

logger = logging.getLogger(__name__)


def xn_derivative(x, y, t, precision_bits=None):
    """x_n' = (sqrt(2) t x - 4 y x^2 - 2)/(2 sqrt(2))."""
    with precision(precision_bits):
        x, y, t = to_ext(x), to_ext(y), to_ext(t)
        root_two = mp.sqrt(2)
        return (root_two * t * x - 4 * y * x**2 - 2) / (2 * root_two)


@dataclass(frozen=True)
class TodaResidual:
    t: mpf
    n: int
    r1: mpf = None
    r2: mpf = None


@dataclass(frozen=True)
class TodaResidualReport:
    t_grid: tuple
    h: mpf
    precision_bits: int
    residuals: tuple = field(default=())

    def max_abs(self):
        values = [
            abs(value)
            for residual in self.residuals
            for value in (residual.r1, residual.r2)
            if value is not None
        ]
        return max(values) if values else mpf(0)


def toda_residuals(params, n_max, t_grid, h=None, precision_bits=None, perturb=None):
    """
    Central-difference residuals of the Toda equations on the Hankel route.

    Args:
        params: WeightParams; its t is replaced by every grid point
        n_max: Largest index N; r1 covers 1..N and r2 covers 0..N-1
        t_grid: Iterable of t values
        h: Difference step, defaults to fd_step(precision_bits)
        perturb: Optional (field, n, delta) added to the central table, where
            field is "a2" or "b"

    Returns:
        TodaResidualReport
    """
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    bits = resolve_precision(precision_bits)
    residuals = []
    with precision(bits):
        h = fd_step(bits) if h is None else to_ext(h)
        grid = tuple(to_ext(t) for t in t_grid)
        for t in grid:
            ahead = hankel_route(params.with_t(t + h), n_max, bits)
            behind = hankel_route(params.with_t(t - h), n_max, bits)
            centre = hankel_route(params.with_t(t), n_max, bits)
            if perturb is not None:
                centre = centre.perturbed(*perturb)
            a2, b = centre.a2, centre.b
            for n in range(n_max + 1):
                r1 = r2 = None
                if n >= 1:
                    slope = (ahead.a2[n] - behind.a2[n]) / (2 * h)
                    r1 = slope - a2[n] * (b[n] - b[n - 1])
                if n < n_max:
                    slope = (ahead.b[n] - behind.b[n]) / (2 * h)
                    r2 = slope - (a2[n + 1] - a2[n])
                residuals.append(TodaResidual(t=t, n=n, r1=r1, r2=r2))
    report = TodaResidualReport(
        t_grid=grid, h=h, precision_bits=bits, residuals=tuple(residuals)
    )
    logger.debug("toda residuals for %s: max %s", params, mp.nstr(report.max_abs(), 5))
    return report


def orbit_slope(params, n, t, precision_bits=None, scale=1):
    """(x_n, x_n') at t from the discrete orbit, with x optionally scaled."""
    bits = resolve_precision(precision_bits)
    state = orbit_state(params.with_t(t), n, bits)
    with precision(bits):
        x = state.x * scale
        if x == 0:
            raise PoleError(f"x_{n} vanishes at t={mp.nstr(t, 15)}")
        return x, xn_derivative(x, state.y, t, bits)


def xn_ode_residual(params, n, t, h=None, precision_bits=None, scale=1):
    """
    Residual of the second-order equation for x_n at t.

    x'' comes from central differencing of the analytic x_n'; the residual is
    x'' - [3/2 x'^2/x + alpha^2/4 x^3 - x/8 (t^2 - 4 - 8n - 4 alpha)
    + t/sqrt(2) - 3/(4x)]. ``scale`` multiplies x_n everywhere.
    """
    bits = resolve_precision(precision_bits)
    with precision(bits):
        t = to_ext(t)
        h = fd_step(bits) if h is None else to_ext(h)
        alpha = params.alpha
        _, ahead = orbit_slope(params, n, t + h, bits, scale)
        _, behind = orbit_slope(params, n, t - h, bits, scale)
        x, slope = orbit_slope(params, n, t, bits, scale)
        second = (ahead - behind) / (2 * h)
        rhs = (
            mpf(3) / 2 * slope**2 / x
            + alpha**2 / 4 * x**3
            - x / 8 * (t**2 - 4 - 8 * n - 4 * alpha)
            + t / mp.sqrt(2)
            - 3 / (4 * x)
        )
        return second - rhs
