"""
Forward iteration of the discrete system for (x_n, y_n).

    y_n + y_{n+1} = (1/x_n)(t/sqrt(2) - 1/x_n)
    x_n x_{n-1} = (y_n + z_n)/(y_n^2 - alpha^2/4),   z_n = n + alpha/2

with 2 a_n^2 = y_n + z_n and 2 b_n = t - sqrt(2)/x_n. The orbit is unstable,
so it runs at the guarded precision of the Hankel route unless asked not to.
"""

import logging
from dataclasses import dataclass

from mpmath import mp, mpf

from moments.hankel import base_moments, hankel_route
from moments.tables import CoeffTable
from numerics.conf import default_tolerances
from numerics.exceptions import (
    DomainError,
    PrecisionExhaustedError,
    SingularInitializationError,
    SingularOrbitError,
)
from numerics.precision import (
    guarded_precision,
    precision,
    resolve_precision,
    singular_threshold,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiscreteState:
    n: int
    x: mpf
    y: mpf
    z: mpf

    @property
    def a2(self):
        return (self.y + self.z) / 2

    def b(self, t):
        return (t - mp.sqrt(2) / self.x) / 2

    def q(self):
        """q_n = -sqrt(2)/x_n, which equals R_n = 2 b_n - t."""
        return -mp.sqrt(2) / self.x


def initial_state(params, precision_bits=None):
    """n = 0 state: x_0 = sqrt(2) mu_0/(t mu_0 - 2 mu_1), y_0 = -alpha/2."""
    bits = resolve_precision(precision_bits)
    mu0, mu1 = base_moments(params, bits)
    with precision(bits):
        alpha, t = params.alpha, params.t
        denominator = t * mu0 - 2 * mu1
        if abs(denominator) <= mp.eps * (abs(t * mu0) + 2 * abs(mu1)):
            raise SingularInitializationError(
                f"t mu_0 = 2 mu_1 for {params}; x_0 is undefined"
            )
        return DiscreteState(
            n=0, x=mp.sqrt(2) * mu0 / denominator, y=-alpha / 2, z=alpha / 2
        )


def run_discrete(params, n_max, precision_bits=None, guard=True):
    """
    Iterate the orbit from the moment-determined initial state up to n_max.

    Returns (states, coeffs) with ``states[n]`` the DiscreteState at index n
    and ``coeffs`` a CoeffTable tagged ``discrete``. The 0/0 instance of the
    first equation at n = 0 is never evaluated.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be nonnegative, got {n_max}")
    bits = resolve_precision(precision_bits)
    work = guarded_precision(bits, n_max) if guard else bits
    state = initial_state(params, work)
    states = [state]
    with precision(work):
        alpha, t = params.alpha, params.t
        root_two = mp.sqrt(2)
        quarter_alpha_squared = alpha**2 / 4
        threshold = singular_threshold(work)
        for n in range(n_max):
            x, y = state.x, state.y
            y_next = (t / root_two - 1 / x) / x - y
            z_next = n + 1 + alpha / 2
            if not y_next + z_next > 0:
                raise PrecisionExhaustedError(
                    f"a_{n + 1}^2 <= 0 on the discrete route for {params}",
                    precision_bits=work,
                )
            denominator = y_next**2 - quarter_alpha_squared
            if abs(denominator) < threshold:
                raise SingularOrbitError(
                    f"y_{n + 1}^2 = alpha^2/4 on the orbit for {params}"
                )
            state = DiscreteState(
                n=n + 1,
                x=(y_next + z_next) / (denominator * x),
                y=y_next,
                z=z_next,
            )
            states.append(state)

        a2 = (mpf(0),) + tuple(state.a2 for state in states[1:])
        b = tuple(state.b(t) for state in states)

    logger.debug("discrete orbit for %s up to n=%d at %d bits", params, n_max, work)
    coeffs = CoeffTable(
        params=params, a2=a2, b=b, route="discrete", precision_bits=work
    )
    return states, coeffs


def orbit_state(params, n, precision_bits=None):
    """The orbit state at index n."""
    states, _ = run_discrete(params, n, precision_bits)
    return states[n]


def relative_difference(value, reference):
    if reference == 0:
        return abs(value)
    return abs(value - reference) / abs(reference)


def route_agreement(params, n_max, precision_bits=None, relative=True):
    """
    Per-n differences between the discrete and Hankel routes, relative unless
    ``relative`` is False.

    Returns a list of dicts with keys n, a2_hankel, a2_discrete, a2_diff,
    b_hankel, b_discrete, b_diff; the a2 entries are None at n = 0.
    """
    bits = resolve_precision(precision_bits)
    hankel = hankel_route(params, max(n_max, 1), bits)
    _, discrete = run_discrete(params, n_max, bits)
    difference = relative_difference if relative else (lambda a, b: abs(a - b))
    rows = []
    with precision(bits):
        for n in range(n_max + 1):
            rows.append(
                {
                    "n": n,
                    "a2_hankel": hankel.a2[n] if n else None,
                    "a2_discrete": discrete.a2[n] if n else None,
                    "a2_diff": (
                        difference(discrete.a2[n], hankel.a2[n]) if n else None
                    ),
                    "b_hankel": hankel.b[n],
                    "b_discrete": discrete.b[n],
                    "b_diff": difference(discrete.b[n], hankel.b[n]),
                }
            )
    return rows


def stable_range(params, n_max, precision_bits=None, tol=None):
    """
    Largest n <= n_max up to which the unguarded discrete orbit agrees with
    the guarded Hankel route to relative tolerance ``tol``.

    Returns -1 when even b_0 disagrees. An orbit that breaks down (singular or
    nonpositive a_n^2) ends the range at the last index it reached.
    """
    bits = resolve_precision(precision_bits)
    with precision(bits):
        tol = mpf(default_tolerances()["route"] if tol is None else tol)
    reference = hankel_route(params, max(n_max, 1), bits)
    last = -1
    for n in range(n_max + 1):
        try:
            _, discrete = run_discrete(params, n, bits, guard=False)
        except (PrecisionExhaustedError, SingularOrbitError) as exc:
            logger.info("unguarded orbit broke down at n=%d, %d bits: %s", n, bits, exc)
            break
        if relative_difference(discrete.b[n], reference.b[n]) > tol:
            break
        if n and relative_difference(discrete.a2[n], reference.a2[n]) > tol:
            break
        last = n
    return last
