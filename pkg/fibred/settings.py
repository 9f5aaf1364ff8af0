"""
Django settings for the fibred project.

The project has no web surface and no models: Django supplies configuration,
logging, the management commands under fibred.interface and the test runner.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

import os
from pathlib import Path

import sentry_sdk
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

dotenv_path = os.path.join(BASE_DIR, ".env")
load_dotenv(dotenv_path=dotenv_path)


SECRET_KEY = os.getenv("SECRET_KEY", "fibred-local-only")

DEBUG = bool(int(os.getenv("DEBUG", 1)))

ALLOWED_HOSTS = []

PROJECT_DIR = "fibred"

# Application definition

INSTALLED_APPS = [
    "fibred.interface",
]


# Sentry initialization
if not DEBUG:
    sentry_sdk.init(
        dsn=os.getenv("SENTRY_DSN"),
        traces_sample_rate=float(os.getenv("SENTRY_TRACES_SAMPLE_RATE", 0.0)),
    )


# The runner needs a connection; nothing is persisted.
DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": ":memory:",
    }
}

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

USE_TZ = True


# Logging

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        "fibred": {
            "handlers": ["console"],
            "level": os.getenv("FIBRED_LOG_LEVEL", "WARNING"),
            "propagate": False,
        },
    },
}


# Universe bounds

VERTEX_BOUND = int(os.getenv("FIBRED_VERTEX_BOUND", 2))
SET_BOUND = int(os.getenv("FIBRED_SET_BOUND", 3))
STATE_BOUND = int(os.getenv("FIBRED_STATE_BOUND", 1))
PORT_BOUND = int(os.getenv("FIBRED_PORT_BOUND", 1))

# Search limits
MAX_OBJECTS = int(os.getenv("FIBRED_MAX_OBJECTS", 6))
SEARCH_MAX_OBJECTS = int(os.getenv("FIBRED_SEARCH_MAX_OBJECTS", 40))

# Generators
GENERATOR_MAX_OBJECTS = int(os.getenv("FIBRED_GENERATOR_MAX_OBJECTS", 5))
GENERATOR_MAX_MORPHISMS = int(os.getenv("FIBRED_GENERATOR_MAX_MORPHISMS", 20))
SEED = int(os.getenv("FIBRED_SEED", 0))

# Minimum input-word length for behavioural comparison of machines
BEHAVIOUR_DEPTH = int(os.getenv("FIBRED_BEHAVIOUR_DEPTH", 4))
