"""
Recurrence coefficients for the Freud weight |x|^(2 alpha + 1) exp(-x^4 + t x^2).

The weight is symmetric, so x P_n = P_{n+1} + A_n^2 P_{n-1} and the A_n^2 obey
the first discrete Painlevé equation

    4 A_n^2 (A_{n-1}^2 + A_n^2 + A_{n+1}^2 - t/2) = n + (2 alpha + 1) (n mod 2)

which is iterated forward from A_0^2 = 0 and A_1^2 = mu_1/mu_0. The even
moments of the weight are the Laguerre moments mu_k at the same (alpha, t).
"""

import dataclasses
import logging
from dataclasses import dataclass

from django.core.cache import cache
from mpmath import mp, mpf

from moments.hankel import (
    base_moments,
    get_cache_key,
    hankel_determinants,
    moment_table,
)
from moments.tables import WeightParams
from numerics.conf import lab_setting
from numerics.exceptions import (
    DomainError,
    IndexOutOfRangeError,
    PrecisionExhaustedError,
)
from numerics.precision import (
    fd_step,
    guarded_precision,
    precision,
    resolve_precision,
    singular_threshold,
    to_ext,
)
from numerics.quadrature import integrate_on_halfline, quadrature_tolerance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FreudTable:
    """``A2[n]`` holds A_n^2 for n = 0..N with ``A2[0] == 0``."""

    alpha: mpf
    t: mpf
    A2: tuple
    precision_bits: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", to_ext(self.alpha))
        object.__setattr__(self, "t", to_ext(self.t))

    @property
    def params(self):
        return WeightParams(self.alpha, self.t)

    @property
    def n_max(self):
        return len(self.A2) - 1

    def check_index(self, n):
        if not 0 <= n <= self.n_max:
            raise IndexOutOfRangeError(
                f"index {n} outside the Freud table range 0..{self.n_max}"
            )

    def perturbed(self, n, delta):
        self.check_index(n)
        values = list(self.A2)
        values[n] = values[n] + delta
        return dataclasses.replace(self, A2=tuple(values))

    def rows(self):
        return [{"n": n, "A2": value} for n, value in enumerate(self.A2)]


def weight_params(alpha, t, bits):
    with precision(bits):
        return WeightParams(to_ext(alpha), to_ext(t))


def dpi_run(alpha, t, n_max, precision_bits=None, guard=True, use_cache=True):
    """
    A_0^2..A_N^2 by forward iteration of the discrete Painlevé I equation.

    Args:
        alpha: Weight exponent parameter, must exceed -1
        t: Coefficient of x^2 in the exponent
        n_max: Largest index N
        precision_bits: Requested precision; the iteration runs guarded
        guard: Raise the working precision with N like the other routes

    Returns:
        FreudTable

    Raises:
        PrecisionExhaustedError: an A_n^2 came out below the singular threshold
    """
    if n_max < 0:
        raise DomainError(f"n_max must be nonnegative, got {n_max}")
    bits = resolve_precision(precision_bits)
    work = guarded_precision(bits, n_max) if guard else bits
    params = weight_params(alpha, t, work)
    cache_key = get_cache_key("dpi", params.cache_token, n_max, work)
    if use_cache:
        cached = cache.get(cache_key)
        if cached is not None:
            return cached

    mu0, mu1 = base_moments(params, work)
    with precision(work):
        alpha, t = params.alpha, params.t
        threshold = singular_threshold(work)
        values = [mpf(0)]
        if n_max >= 1:
            values.append(mu1 / mu0)
        for n in range(1, n_max):
            delta = n % 2
            following = (
                (n + (2 * alpha + 1) * delta) / (4 * values[n])
                - values[n - 1]
                - values[n]
                + t / 2
            )
            if not following > threshold:
                raise PrecisionExhaustedError(
                    f"A_{n + 1}^2 <= 0 on the dPI orbit for {params}",
                    precision_bits=work,
                )
            values.append(following)

    table = FreudTable(alpha=alpha, t=t, A2=tuple(values), precision_bits=work)
    if use_cache:
        cache.set(cache_key, table, timeout=lab_setting("CACHE_TIMEOUT"))
    logger.debug("dPI orbit for %s up to n=%d at %d bits", params, n_max, work)
    return table


def freud_hankel_route(alpha, t, n_max, precision_bits=None):
    """
    A_n^2 from Hankel determinants, using the even/odd decoupling.

    With h_m = D_{m+1}/D_m over mu_k (alpha) and over mu_{k+1} (alpha + 1):

        A_{2m}^2 = h_m(alpha)/h_{m-1}(alpha + 1)
        A_{2m+1}^2 = h_m(alpha + 1)/h_m(alpha)
    """
    if n_max < 0:
        raise DomainError(f"n_max must be nonnegative, got {n_max}")
    bits = resolve_precision(precision_bits)
    work = guarded_precision(bits, n_max)
    params = weight_params(alpha, t, work)
    size = n_max // 2 + 2
    table = moment_table(params, 2 * size + 1, work)
    with precision(work):
        families = {"even": table.mu, "odd": table.mu[1:]}
        norms = {}
        for family, mu in families.items():
            determinants = [hankel_determinants(mu, m)[0] for m in range(size + 1)]
            if not all(value > 0 for value in determinants):
                raise PrecisionExhaustedError(
                    f"Freud Hankel determinant <= 0 for {params}", precision_bits=work
                )
            norms[family] = [
                determinants[m + 1] / determinants[m] for m in range(size)
            ]
        values = [mpf(0)]
        for n in range(1, n_max + 1):
            m, odd = divmod(n, 2)
            if odd:
                values.append(norms["odd"][m] / norms["even"][m])
            else:
                values.append(norms["even"][m] / norms["odd"][m - 1])
    logger.info("Freud Hankel route for %s up to n=%d at %d bits", params, n_max, work)
    return FreudTable(
        alpha=params.alpha, t=params.t, A2=tuple(values), precision_bits=work
    )


def freud_moment(alpha, t, k, precision_bits=None, tol=None):
    """
    m_k = integral of x^k |x|^(2 alpha + 1) exp(-x^4 + t x^2) over the real line.

    Odd moments vanish by symmetry; even ones are twice the half-line
    quadrature.
    """
    if k < 0:
        raise DomainError(f"moment index must be nonnegative, got {k}")
    bits = resolve_precision(precision_bits)
    params = weight_params(alpha, t, bits)
    with precision(bits):
        if k % 2:
            return mpf(0)
        tol = quadrature_tolerance(bits) if tol is None else to_ext(tol)
        exponent = 2 * params.alpha + 1 + k
        t = params.t

        def integrand(x):
            if x == 0:
                return mpf(0)
            square = x * x
            return x**exponent * mp.exp(-square * square + t * square)

        split = max(mpf(1), mp.sqrt(abs(t)))
        half = integrate_on_halfline(integrand, split, tol / 2, label=f"Freud m_{k}")
        return 2 * half


def dpi_f2_residual(alpha, t, n, h=None, precision_bits=None, perturb=None):
    """
    Central-difference residual of dA_n^2/dt = A_n^2 (A_{n+1}^2 - A_{n-1}^2).

    ``perturb`` is an optional (index, delta) added to the central table.
    """
    if n < 1:
        raise DomainError(f"the dPI flow needs n >= 1, got {n}")
    bits = resolve_precision(precision_bits)
    with precision(bits):
        t = to_ext(t)
        h = fd_step(bits) if h is None else to_ext(h)
        ahead = dpi_run(alpha, t + h, n + 1, bits)
        behind = dpi_run(alpha, t - h, n + 1, bits)
        centre = dpi_run(alpha, t, n + 1, bits)
        if perturb is not None:
            centre = centre.perturbed(*perturb)
        A2 = centre.A2
        slope = (ahead.A2[n] - behind.A2[n]) / (2 * h)
        return slope - A2[n] * (A2[n + 1] - A2[n - 1])
