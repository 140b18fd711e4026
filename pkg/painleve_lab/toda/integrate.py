"""
Adaptive Runge-Kutta-Fehlberg 4(5) integration of the truncated Toda system.

The unknowns are a_1^2..a_N^2 and b_0..b_N; the one coefficient outside the
truncation, a_{N+1}^2(t), is supplied by the Hankel route at every stage.
"""

import logging

from mpmath import mp, mpf

from moments.hankel import hankel_route
from moments.tables import CoeffTable
from numerics.exceptions import DomainError, StiffnessError
from numerics.precision import precision, resolve_precision, to_ext

logger = logging.getLogger(__name__)

SAFETY = mpf("0.9")
MIN_FACTOR = mpf("0.1")
MAX_FACTOR = 4


def _tableau():
    """Fehlberg nodes, stage weights and the fifth-order/error weights."""
    r = mpf
    nodes = (r(0), r(1) / 4, r(3) / 8, r(12) / 13, r(1), r(1) / 2)
    stages = (
        (),
        (r(1) / 4,),
        (r(3) / 32, r(9) / 32),
        (r(1932) / 2197, r(-7200) / 2197, r(7296) / 2197),
        (r(439) / 216, r(-8), r(3680) / 513, r(-845) / 4104),
        (r(-8) / 27, r(2), r(-3544) / 2565, r(1859) / 4104, r(-11) / 40),
    )
    fifth = (r(16) / 135, 0, r(6656) / 12825, r(28561) / 56430, r(-9) / 50, r(2) / 55)
    error = (r(1) / 360, 0, r(-128) / 4275, r(-2197) / 75240, r(1) / 50, r(2) / 55)
    return nodes, stages, fifth, error


def rkf45_step(rhs, t, h, y):
    """One Fehlberg step; returns (fifth-order solution, error vector)."""
    nodes, stages, fifth, error = _tableau()
    slopes = []
    for node, weights in zip(nodes, stages):
        point = y.copy()
        for weight, slope in zip(weights, slopes):
            point += (h * weight) * slope
        slopes.append(rhs(t + node * h, point))
    solution = y.copy()
    estimate = mp.matrix(y.rows, 1)
    for weight, err_weight, slope in zip(fifth, error, slopes):
        solution += (h * weight) * slope
        estimate += (h * err_weight) * slope
    return solution, estimate


def _to_table(params, t, y, n_max, bits):
    a2 = (mpf(0),) + tuple(y[i] for i in range(n_max))
    b = tuple(y[n_max + i] for i in range(n_max + 1))
    return CoeffTable(
        params=params.with_t(t), a2=a2, b=b, route="toda", precision_bits=bits
    )


def toda_integrate(
    params, n_max, t0, t1, tol, precision_bits=None, initial_step=None, max_steps=100000
):
    """
    Integrate the Toda system for n = 0..n_max from t0 to t1.

    Args:
        params: WeightParams; only alpha is used, t runs from t0 to t1
        n_max: Truncation index N >= 1
        t0, t1: Interval ends, t0 <= t1
        tol: Local error tolerance (max norm over components)
        initial_step: First trial step, defaults to (t1 - t0)/16

    Returns:
        List of CoeffTable (route ``toda``), one per accepted step, starting
        with the Hankel-route data at t0.
    """
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    bits = resolve_precision(precision_bits)
    with precision(bits):
        t0, t1, tol = to_ext(t0), to_ext(t1), to_ext(tol)
        if t0 > t1:
            raise DomainError("toda_integrate needs t0 <= t1")
        if not tol > 0:
            raise DomainError("tolerance must be positive")

        start = hankel_route(params.with_t(t0), n_max, bits)
        y = mp.matrix(list(start.a2[1:]) + list(start.b))
        trajectory = [_to_table(params, t0, y, n_max, bits)]
        if t0 == t1:
            return trajectory

        def rhs(t, state):
            closure = hankel_route(
                params.with_t(t), n_max + 1, bits, use_cache=False
            ).a2[n_max + 1]
            a2 = [mpf(0)] + [state[i] for i in range(n_max)] + [closure]
            b = [state[n_max + i] for i in range(n_max + 1)]
            slope = mp.matrix(2 * n_max + 1, 1)
            for n in range(1, n_max + 1):
                slope[n - 1] = a2[n] * (b[n] - b[n - 1])
            for n in range(n_max + 1):
                slope[n_max + n] = a2[n + 1] - a2[n]
            return slope

        t = t0
        step = (t1 - t0) / 16 if initial_step is None else to_ext(initial_step)
        min_step = (t1 - t0) * mp.ldexp(mpf(1), -(bits // 4))
        accepted = rejected = 0
        while t < t1:
            if accepted + rejected >= max_steps:
                raise StiffnessError(f"no convergence within {max_steps} steps")
            last = step >= t1 - t
            if last:
                step = t1 - t
            solution, estimate = rkf45_step(rhs, t, step, y)
            err = mp.norm(estimate, mp.inf)
            if err <= tol:
                t = t1 if last else t + step
                y = solution
                trajectory.append(_to_table(params, t, y, n_max, bits))
                accepted += 1
            else:
                rejected += 1
            factor = MAX_FACTOR if err == 0 else SAFETY * (tol / err) ** (mpf(1) / 5)
            step *= min(max(factor, MIN_FACTOR), MAX_FACTOR)
            if t < t1 and step < min_step:
                raise StiffnessError(
                    f"step size underflow at t={mp.nstr(t, 15)} "
                    f"(step {mp.nstr(step, 5)})"
                )
        logger.info(
            "toda integration for %s: %d accepted, %d rejected steps",
            params,
            accepted,
            rejected,
        )
        return trajectory
