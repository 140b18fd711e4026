"""
Extended-precision arithmetic contract.

``ExtReal`` is an ``mpmath.mpf``; the working mantissa width is controlled with
the ``precision`` context manager, which wraps ``mp.workprec``.
"""

import math

from mpmath import mp, mpf

from .conf import lab_setting
from .exceptions import DomainError

ExtReal = mpf

MIN_PRECISION_BITS = 64


def resolve_precision(precision_bits=None):
    """Return the validated working precision, defaulting to the settings."""
    if precision_bits is None:
        precision_bits = lab_setting("PRECISION_BITS")
    precision_bits = int(precision_bits)
    if precision_bits < MIN_PRECISION_BITS:
        raise DomainError(
            f"precision_bits must be at least {MIN_PRECISION_BITS}, "
            f"got {precision_bits}"
        )
    return precision_bits


def precision(precision_bits=None):
    """Context manager running the enclosed block at the given precision."""
    return mp.workprec(resolve_precision(precision_bits))


def guarded_precision(precision_bits, index):
    """
    Working precision for routes that lose O(index) bits.

    Hankel determinants and the forward orbits lose a number of bits that
    grows with the largest index, so they run at
    ``max(precision_bits, base + per_index * index)``.
    """
    base = lab_setting("GUARD_BITS_BASE")
    per_index = lab_setting("GUARD_BITS_PER_INDEX")
    return max(resolve_precision(precision_bits), base + per_index * int(index))


def to_ext(value):
    """Convert ints, floats, decimal strings and mpf values at the current precision."""
    if isinstance(value, str):
        value = value.strip()
    return mpf(value)


def fd_step(precision_bits=None):
    """Central-difference step: 2^-32 at 256 bits, 2^-(bits/8) in general."""
    bits = resolve_precision(precision_bits)
    exponent = lab_setting("FD_STEP_EXPONENT") * bits // 256
    return mp.ldexp(mpf(1), -exponent)


def singular_threshold(precision_bits=None):
    """Magnitude below which a denominator is treated as vanishing."""
    bits = resolve_precision(precision_bits)
    return mp.ldexp(mpf(1), -(bits // 2))


def significant_digits(precision_bits=None):
    """Decimal digits rendered for a value computed at ``precision_bits``."""
    return math.ceil(resolve_precision(precision_bits) * 0.30103)


def ulp_distance(value, reference, precision_bits=None):
    """Distance between two numbers in units of the last place of ``reference``."""
    bits = resolve_precision(precision_bits)
    with mp.workprec(bits + 32):
        if reference == 0:
            return abs(mpf(value)) / mp.ldexp(mpf(1), -bits)
        unit = mp.ldexp(mpf(1), int(mp.floor(mp.log(abs(reference), 2))) - bits + 1)
        return abs(mpf(value) - mpf(reference)) / unit


def agreed_bits(value, reference):
    """Number of leading bits on which two numbers agree."""
    with mp.workprec(max(mp.prec, 64) + 64):
        difference = abs(mpf(value) - mpf(reference))
        if difference == 0:
            return mp.inf
        scale = max(abs(mpf(reference)), mpf(1))
        return -mp.log(difference / scale, 2)
