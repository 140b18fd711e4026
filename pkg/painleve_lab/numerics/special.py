import itertools

from mpmath import mp

from .exceptions import DomainError
from .precision import precision, resolve_precision, to_ext


def gamma(s, precision_bits=None):
    """
    Gamma function of a positive real argument at the working precision.

    Args:
        s: Positive real (int, float, decimal string or mpf)
        precision_bits: Working precision, defaults to the configured one

    Returns:
        mpf value of Gamma(s)
    """
    bits = resolve_precision(precision_bits)
    with precision(bits):
        s = to_ext(s)
        if not s > 0:
            raise DomainError(f"gamma requires s > 0, got {mp.nstr(s, 15)}")
        return mp.gamma(s)


def iter_half_gammas(alpha, precision_bits=None):
    """
    Yield g_j = Gamma((j + alpha + 1)/2)/2 for j = 0, 1, 2, ...

    Only two gamma evaluations are made; the rest follows from
    g_{j+2} = (j + alpha + 1)/2 * g_j.
    """
    bits = resolve_precision(precision_bits)
    with precision(bits):
        alpha = to_ext(alpha)
        pair = (gamma((alpha + 1) / 2, bits) / 2, gamma((alpha + 2) / 2, bits) / 2)
    j = 0
    while True:
        yield pair[0]
        with precision(bits):
            pair = (pair[1], (j + alpha + 1) / 2 * pair[0])
        j += 1


def half_gamma_sequence(alpha, count, precision_bits=None):
    """The first ``count`` values of ``iter_half_gammas``."""
    return list(itertools.islice(iter_half_gammas(alpha, precision_bits), count))
