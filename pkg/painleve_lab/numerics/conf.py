"""Access to ``LABORATORY_SETTINGS`` with library defaults."""

import logging

from django.core.exceptions import ImproperlyConfigured

logger = logging.getLogger(__name__)

DEFAULTS = {
    "PRECISION_BITS": 256,
    "FD_STEP_EXPONENT": 32,
    "GUARD_BITS_BASE": 64,
    "GUARD_BITS_PER_INDEX": 24,
    "CACHE_TIMEOUT": 60 * 60,
    "TOLERANCES": {
        "route": "1e-25",
        "toda": "1e-12",
        "ode": "1e-12",
        "p4": "1e-12",
        "riccati": "1e-25",
        "cond": "1e-25",
        "ladder": "1e-20",
        "w": "1e-15",
        "fd": "1e-12",
        "integrate": "1e-10",
    },
}


def lab_setting(name):
    """
    Return a laboratory setting, falling back to the library default.

    Works without Django settings configured so the numeric apps can be
    imported as a plain library.
    """
    from django.conf import settings

    try:
        configured = getattr(settings, "LABORATORY_SETTINGS", {})
    except ImproperlyConfigured:
        configured = {}
    return configured.get(name, DEFAULTS[name])


def default_tolerances():
    """Default tolerances as decimal strings, keyed by check family."""
    tolerances = dict(DEFAULTS["TOLERANCES"])
    tolerances.update(lab_setting("TOLERANCES"))
    return tolerances
