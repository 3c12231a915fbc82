"""
Django settings for the koppelman project.

The project has no web surface and no database; Django provides the
settings layer, app registry, logging configuration and the management
command used as the command-line front end.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv(os.path.join(Path(__file__).resolve().parent.parent, ".env"))

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv("SECRET_KEY", "unsafe-secret-key")

DEBUG = os.getenv("DEBUG", "False") == "True"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "rest_framework",
    "polyalg",
    "curves",
    "differentials",
    "quadrature",
    "kernels",
    "operators",
    "cli",
]

# Value objects only, nothing is persisted
DATABASES = {}

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(f"KOPPELMAN_{name}", default))


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(f"KOPPELMAN_{name}", default))


# Numerical defaults (all overridable per call and per environment)
KOPPELMAN = {
    # circle rule
    "CIRCLE_NODES": _env_int("CIRCLE_NODES", 2048),
    # origin-centred annulus rule
    "ANNULUS_PANELS": _env_int("ANNULUS_PANELS", 32),
    "ANNULUS_ORDER": _env_int("ANNULUS_ORDER", 16),
    "ANNULUS_THETA": _env_int("ANNULUS_THETA", 1024),
    # target-centred disc used for the diagonal
    "LOCAL_PANELS": _env_int("LOCAL_PANELS", 16),
    "LOCAL_THETA": _env_int("LOCAL_THETA", 256),
    # principal value at the singular parameter
    "PV_EPS0": _env_float("PV_EPS0", 0.05),
    "PV_SHRINK": _env_float("PV_SHRINK", 0.5),
    "PV_MAX_STEPS": _env_int("PV_MAX_STEPS", 40),
    "PV_TOL": _env_float("PV_TOL", 1e-12),
    # moment criterion, relative to the size of each pairing integral
    "MOMENT_TOL": _env_float("MOMENT_TOL", 1e-6),
    "MOMENT_AGREE_TOL": _env_float("MOMENT_AGREE_TOL", 1e-9),
    # kernel guards
    "GUARD_REMOVABLE": _env_float("GUARD_REMOVABLE", 1e-3),
    "GUARD_DIAGONAL": _env_float("GUARD_DIAGONAL", 1e-3),
    # verification
    "FD_STEP": _env_float("FD_STEP", 1e-4),
    # curve validation
    "CURVE_CHECK_SAMPLES": _env_int("CURVE_CHECK_SAMPLES", 32),
    "CURVE_CHECK_TOL": _env_float("CURVE_CHECK_TOL", 1e-10),
    "RANDOM_SEED": _env_int("RANDOM_SEED", 20240601),
}


# Logging
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
            "stream": "ext://sys.stderr",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": os.getenv("LOG_LEVEL", "WARNING"),
    },
}


# Django REST Framework settings (serializers only, no views)
REST_FRAMEWORK = {
    "UNAUTHENTICATED_USER": None,
    "COERCE_DECIMAL_TO_STRING": False,
}
