"""
Ladder-operator coefficients for the semi-classical Laguerre weight.

With A_n(x) = 2 + R_n/x and B_n(x) = r_n/x (valid for alpha > 0) the
compatibility conditions reduce to scalar identities between
R_n = 2 b_n - t, r_n = 2 a_n^2 - n and the recurrence coefficients.
"""

import logging
from dataclasses import dataclass

from mpmath import mp, mpf

from discrete_system.orbit import orbit_state
from moments.hankel import base_moments, hankel_route
from numerics.exceptions import HypothesisError, IndexOutOfRangeError
from numerics.precision import precision, resolve_precision, to_ext
from numerics.quadrature import integrate_weighted

logger = logging.getLogger(__name__)

CONDITIONS = (
    "cond2",
    "cond3",
    "cond4",
    "cond6",
    "cond7",
    "first_equation",
    "second_equation",
)


def require_positive_alpha(params):
    if not params.alpha > 0:
        raise HypothesisError(
            f"ladder coefficients need alpha > 0, got {mp.nstr(params.alpha, 15)}"
        )


@dataclass(frozen=True)
class LadderCoeffs:
    n: int
    R: mpf
    r: mpf


@dataclass(frozen=True)
class ConditionResidual:
    identity: str
    n: int
    residual: mpf


def ladder_from_coeffs(coeffs, n, t=None):
    """R_n = 2 b_n - t and r_n = 2 a_n^2 - n from a coefficient table."""
    require_positive_alpha(coeffs.params)
    coeffs.check_index(n)
    with precision(coeffs.precision_bits):
        t = coeffs.params.t if t is None else to_ext(t)
        return LadderCoeffs(n=n, R=2 * coeffs.b[n] - t, r=2 * coeffs.a2[n] - n)


def verify_conditions(coeffs, t=None, n_max=None, precision_bits=None):
    """
    Residuals of the scalar compatibility conditions.

        cond2            r_n + r_{n+1} - (alpha - b_n R_n)
        cond3            1 + r_{n+1} - r_n - 2 (beta_{n+1} - beta_n)
        cond4            b_n (r_n - r_{n+1}) - (beta_{n+1} R_{n+1} - beta_n R_{n-1})
        cond6            sum_{j<n} R_j - t r_n - 2 beta_n (R_{n-1} + R_n)
        cond7            r_n^2 - alpha r_n - beta_n R_{n-1} R_n
        first_equation   beta_n R_{n-1} R_n - [(2 beta_n - n - alpha/2)^2 - alpha^2/4]
        second_equation  2 (beta_n + beta_{n+1}) - 2n - 1 - alpha + R_n (t + R_n)/2

    cond2, cond3, cond4 and second_equation cover n = 0..N; the rest cover
    n = 1..N. The table must reach index N + 1.

    Returns:
        List of ConditionResidual ordered by n, then identity
    """
    require_positive_alpha(coeffs.params)
    n_max = coeffs.n_max - 1 if n_max is None else n_max
    if n_max + 1 > coeffs.n_max:
        raise IndexOutOfRangeError(
            f"conditions up to n={n_max} need the table up to n={n_max + 1}"
        )
    bits = resolve_precision(precision_bits or coeffs.precision_bits)
    rows = []
    with precision(bits):
        t = coeffs.params.t if t is None else to_ext(t)
        alpha = coeffs.params.alpha
        beta, b = coeffs.a2, coeffs.b
        R = [2 * value - t for value in b]
        r = [2 * value - k for k, value in enumerate(beta)]

        for n in range(n_max + 1):
            # beta_0 = 0 removes the R_{-1} term
            previous = beta[n] * R[n - 1] if n else mpf(0)
            residuals = {
                "cond2": r[n] + r[n + 1] - (alpha - b[n] * R[n]),
                "cond3": 1 + r[n + 1] - r[n] - 2 * (beta[n + 1] - beta[n]),
                "cond4": (
                    b[n] * (r[n] - r[n + 1]) - (beta[n + 1] * R[n + 1] - previous)
                ),
                "second_equation": (
                    2 * (beta[n] + beta[n + 1])
                    - 2 * n
                    - 1
                    - alpha
                    + R[n] * (t + R[n]) / 2
                ),
            }
            if n >= 1:
                residuals["cond6"] = (
                    mp.fsum(R[:n]) - t * r[n] - 2 * beta[n] * (R[n - 1] + R[n])
                )
                residuals["cond7"] = (
                    r[n] ** 2 - alpha * r[n] - beta[n] * R[n - 1] * R[n]
                )
                residuals["first_equation"] = beta[n] * R[n - 1] * R[n] - (
                    (2 * beta[n] - n - alpha / 2) ** 2 - alpha**2 / 4
                )
            for identity in CONDITIONS:
                if identity in residuals:
                    rows.append(ConditionResidual(identity, n, residuals[identity]))
    return rows


def eval_orthonormal_all(coeffs, n, x, mu0=None):
    """
    p_0(x)..p_n(x) by the forward recurrence

        p_{k+1} = ((x - b_k) p_k - a_k p_{k-1}) / a_{k+1},   p_0 = 1/sqrt(mu_0)
    """
    coeffs.check_index(n)
    if mu0 is None:
        mu0, _ = base_moments(coeffs.params, coeffs.precision_bits)
    a = [mp.sqrt(value) for value in coeffs.a2]
    values = [1 / mp.sqrt(mu0)]
    previous = mpf(0)
    for k in range(n):
        following = ((x - coeffs.b[k]) * values[k] - a[k] * previous) / a[k + 1]
        previous = values[k]
        values.append(following)
    return values


def eval_orthonormal(coeffs, n, x, mu0=None, precision_bits=None):
    """Orthonormal polynomial p_n(x) for the table's weight."""
    with precision(precision_bits):
        return eval_orthonormal_all(coeffs, n, to_ext(x), mu0)[n]


def orthonormality_gram(coeffs, n, precision_bits=None):
    """
    Gram matrix [integral p_j p_k w] for j, k = 0..n by quadrature.

    Returns an ``mpmath.matrix`` that should be the identity to within the
    quadrature tolerance.
    """
    bits = resolve_precision(precision_bits)
    coeffs.check_index(n)
    mu0, _ = base_moments(coeffs.params, bits)
    gram = mp.matrix(n + 1, n + 1)
    with precision(bits):
        for j in range(n + 1):
            for k in range(j, n + 1):

                def product(x, j=j, k=k):
                    values = eval_orthonormal_all(coeffs, k, x, mu0)
                    return values[j] * values[k]

                value = integrate_weighted(
                    product, coeffs.params.alpha, coeffs.params.t, precision_bits=bits
                )
                gram[j, k] = gram[k, j] = value
    return gram


def w_equals_Rn_check(params, n, precision_bits=None, coeffs=None):
    """
    Both sides of R_n = alpha * integral p_n(y)^2 y^(alpha-1) exp(-y^2 + t y) dy.

    The left side is -sqrt(2)/x_n from the discrete orbit, the right side is
    a quadrature over the orthonormal polynomial from ``coeffs`` (the Hankel
    route by default).

    Returns:
        (lhs, rhs)
    """
    require_positive_alpha(params)
    bits = resolve_precision(precision_bits)
    if coeffs is None:
        coeffs = hankel_route(params, max(n, 1), bits)
    state = orbit_state(params, n, bits)
    mu0, _ = base_moments(params, bits)
    with precision(bits):
        lhs = state.q()

        def squared(y):
            return eval_orthonormal_all(coeffs, n, y, mu0)[n] ** 2

        integral = integrate_weighted(
            squared, params.alpha - 1, params.t, precision_bits=bits
        )
        rhs = params.alpha * integral
    logger.debug(
        "W = R_%d for %s: lhs %s rhs %s", n, params, mp.nstr(lhs, 20), mp.nstr(rhs, 20)
    )
    return lhs, rhs
