"""
Moment route to the recurrence coefficients.

Moments of x^alpha exp(-x^2 + t x) come from a gamma series and the three-term
moment recursion; the coefficients follow from ratios of Hankel determinants.
"""

import hashlib
import logging

from django.core.cache import cache
from mpmath import mp

from numerics.conf import lab_setting
from numerics.exceptions import DomainError, PrecisionExhaustedError
from numerics.precision import guarded_precision, precision, resolve_precision
from numerics.special import iter_half_gammas

from .tables import CoeffTable, MomentTable

logger = logging.getLogger(__name__)


def get_cache_key(prefix, *parts):
    """Generate cache key for laboratory tables."""
    digest = hashlib.sha1(repr(parts).encode()).hexdigest()
    return f"painleve:{prefix}:{digest}"


def _cancellation_bits(t, size=0):
    # The series and the recursion for t < 0 lose roughly this many bits
    return 32 + int(abs(t) ** 2) + int(4 * abs(t) * mp.sqrt(size + 1))


def base_moments(params, precision_bits=None):
    """
    Return (mu_0, mu_1) for the given weight.

    mu_k = sum_m t^m/m! * Gamma((k + m + alpha + 1)/2)/2, summed until a term
    falls below 2^-(precision_bits + 16) of the partial sum once the terms have
    started to decrease.
    """
    bits = resolve_precision(precision_bits)
    work = bits + _cancellation_bits(params.t)
    with precision(work):
        alpha, t = params.alpha, params.t
        threshold = mp.ldexp(mp.mpf(1), -(bits + 16))
        gammas = iter_half_gammas(alpha, work)
        g = [next(gammas), next(gammas)]
        mu0 = mp.mpf(0)
        mu1 = mp.mpf(0)
        power = mp.mpf(1)
        m = 0
        while True:
            g.append(next(gammas))
            term0 = power * g[m]
            term1 = power * g[m + 1]
            mu0 += term0
            mu1 += term1
            past_peak = m * m > t**4 / 4 + 1
            if t == 0 or (
                past_peak
                and abs(term0) <= threshold * abs(mu0)
                and abs(term1) <= threshold * abs(mu1)
            ):
                break
            m += 1
            power = power * t / m
        logger.debug("base moments for %s summed %d terms", params, m + 1)
    with precision(bits + 32):
        return +mu0, +mu1


def weber_hermite_moments(params, precision_bits=None):
    """
    Return (mu_0, mu_1) in closed form through parabolic cylinder functions.

    mu_k = 2^(-(k+alpha+1)/2) Gamma(k+alpha+1) e^(t^2/8) D_{-(k+alpha+1)}(-t/sqrt(2))

    Independent of the gamma series, with no cancellation for t < 0.
    """
    bits = resolve_precision(precision_bits)
    with precision(bits + 32):
        alpha, t = params.alpha, params.t
        argument = -t / mp.sqrt(2)
        scale = mp.exp(t**2 / 8)
        moments = []
        for k in (0, 1):
            order = k + alpha + 1
            moments.append(
                mp.power(2, -order / 2) * mp.gamma(order) * scale
                * mp.pcfd(-order, argument)
            )
        logger.debug("Weber-Hermite moments for %s", params)
        return tuple(moments)


def moment_table(params, size, precision_bits=None):
    """
    Moments mu_0..mu_size by mu_{k+2} = ((alpha + k + 1) mu_k + t mu_{k+1})/2.

    For t < 0 the recursion runs with extra bits since the companion
    solution supported on the negative axis grows faster than the moments.
    """
    if size < 1:
        raise DomainError(f"moment table needs size >= 1, got {size}")
    bits = resolve_precision(precision_bits)
    work = bits + _cancellation_bits(params.t, size)
    mu0, mu1 = base_moments(params, work)
    with precision(work):
        alpha, t = params.alpha, params.t
        mu = [mu0, mu1]
        for k in range(size - 1):
            mu.append(((alpha + k + 1) * mu[k] + t * mu[k + 1]) / 2)
    if any(value <= 0 for value in mu):
        raise PrecisionExhaustedError(
            f"nonpositive moment for {params}", precision_bits=bits
        )
    return MomentTable(params=params, mu=tuple(mu), precision_bits=bits)


def hankel_determinants(mu, n):
    """
    Return (D_n, D'_n) for the moment sequence ``mu``.

    D_n = det[mu_{i+j}] for 0 <= i, j < n and D'_n is the same determinant
    with its last column replaced by mu_{i+n}. D_0 = 1 and D'_0 = 0.
    """
    if n == 0:
        return mp.mpf(1), mp.mpf(0)
    if len(mu) < 2 * n:
        raise DomainError(f"D'_{n} needs moments up to index {2 * n - 1}")
    matrix = mp.matrix(n, n)
    for i in range(n):
        for j in range(n):
            matrix[i, j] = mu[i + j]
    determinant = mp.det(matrix)
    for i in range(n):
        matrix[i, n - 1] = mu[i + n]
    return determinant, mp.det(matrix)


def hankel_route(params, n_max, precision_bits=None, use_cache=True):
    """
    Recurrence coefficients a_n^2 (1 <= n <= n_max) and b_n (0 <= n <= n_max).

    b_n = D'_{n+1}/D_{n+1} - D'_n/D_n and a_n^2 = D_{n+1} D_{n-1} / D_n^2,
    evaluated at ``max(precision_bits, 64 + 24 n_max)`` bits. Tables are cached
    per (alpha, t, n_max, precision).
    """
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    work = guarded_precision(precision_bits, n_max)
    cache_key = get_cache_key("hankel", params.cache_token, n_max, work)
    if use_cache:
        cached = cache.get(cache_key)
        if cached is not None:
            return cached

    table = moment_table(params, 2 * n_max + 1, work)
    with precision(work):
        determinants = []
        for n in range(n_max + 2):
            d, d_prime = hankel_determinants(table.mu, n)
            if n > 0 and not d > 0:
                raise PrecisionExhaustedError(
                    f"Hankel determinant D_{n} <= 0 for {params}", precision_bits=work
                )
            determinants.append((d, d_prime))

        ratios = [d_prime / d for d, d_prime in determinants]
        b = tuple(ratios[n + 1] - ratios[n] for n in range(n_max + 1))
        a2 = [mp.mpf(0)]
        for n in range(1, n_max + 1):
            value = (
                determinants[n + 1][0]
                * determinants[n - 1][0]
                / determinants[n][0] ** 2
            )
            if not value > 0:
                raise PrecisionExhaustedError(
                    f"a_{n}^2 <= 0 on the Hankel route for {params}",
                    precision_bits=work,
                )
            a2.append(value)

    coeffs = CoeffTable(
        params=params, a2=tuple(a2), b=b, route="hankel", precision_bits=work
    )
    if use_cache:
        cache.set(cache_key, coeffs, timeout=lab_setting("CACHE_TIMEOUT"))
    logger.info("hankel route for %s up to n=%d at %d bits", params, n_max, work)
    return coeffs
