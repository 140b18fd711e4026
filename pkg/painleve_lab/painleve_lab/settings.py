"""
Django settings for painleve_lab project.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Build paths inside the project
BASE_DIR = Path(__file__).resolve().parent.parent

# Security settings
SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "painleve-lab-insecure-key")
DEBUG = os.getenv("DEBUG", "0") == "1"
ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    # Third-party apps
    "rest_framework",
    # Local apps
    "numerics",
    "moments",
    "discrete_system",
    "toda",
    "painleve4",
    "ladder",
    "freud",
    "reports",
]

# No database: every computation is in-process and nothing is persisted
DATABASES = {}

# Cache configuration
CACHES = {
    "default": {
        "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
        "LOCATION": "painleve-lab",
        "OPTIONS": {
            "MAX_ENTRIES": 2048,
        },
    }
}

# Laboratory settings
LABORATORY_SETTINGS = {
    "PRECISION_BITS": int(os.getenv("PAINLEVE_PRECISION_BITS", "256")),
    "FD_STEP_EXPONENT": 32,  # h = 2^-32 at 256 bits
    "GUARD_BITS_BASE": 64,
    "GUARD_BITS_PER_INDEX": 24,
    "CACHE_TIMEOUT": 60 * 60,  # 1 hour
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

# Logging settings
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "%(levelname)s %(name)s: %(message)s",
        },
    },
    "handlers": {
        "stderr": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
        },
    },
    "loggers": {
        app: {
            "handlers": ["stderr"],
            "level": os.getenv("PAINLEVE_LOG_LEVEL", "WARNING"),
            "propagate": False,
        }
        for app in (
            "numerics",
            "moments",
            "discrete_system",
            "toda",
            "painleve4",
            "ladder",
            "freud",
            "reports",
        )
    },
}

# Internationalization settings
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True
