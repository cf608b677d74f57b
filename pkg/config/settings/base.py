# ruff: noqa: ERA001, E501
"""Base settings to build other settings files upon."""

import ssl
from pathlib import Path

import environ

BASE_DIR = Path(__file__).resolve(strict=True).parent.parent.parent
# bautinkit/
APPS_DIR = BASE_DIR / "bautinkit"
env = environ.Env()

READ_DOT_ENV_FILE = env.bool("DJANGO_READ_DOT_ENV_FILE", default=False)

if READ_DOT_ENV_FILE:
    # OS environment variables take precedence over variables from .env
    env.read_env(str(BASE_DIR / ".env"))

# GENERAL
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#debug
DEBUG = env.bool("DJANGO_DEBUG", False)
# https://docs.djangoproject.com/en/dev/ref/settings/#secret-key
SECRET_KEY = env("DJANGO_SECRET_KEY", default="bautinkit-batch-toolkit-has-no-sessions")
TIME_ZONE = "UTC"
# https://docs.djangoproject.com/en/dev/ref/settings/#language-code
LANGUAGE_CODE = "en-us"
# https://docs.djangoproject.com/en/dev/ref/settings/#use-i18n
USE_I18N = False
# https://docs.djangoproject.com/en/dev/ref/settings/#use-tz
USE_TZ = True

# DATABASES
# ------------------------------------------------------------------------------
# The toolkit keeps no models; the database only backs Django's own machinery.
# https://docs.djangoproject.com/en/dev/ref/settings/#databases
DATABASES = {"default": env.db("DATABASE_URL", default=f"sqlite:///{BASE_DIR / 'bautinkit.sqlite3'}")}
# https://docs.djangoproject.com/en/stable/ref/settings/#std:setting-DEFAULT_AUTO_FIELD
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# APPS
# ------------------------------------------------------------------------------
DJANGO_APPS: list[str] = []
THIRD_PARTY_APPS: list[str] = []

LOCAL_APPS = [
    "bautinkit.analysis",
]
# https://docs.djangoproject.com/en/dev/ref/settings/#installed-apps
INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS

# LOGGING
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#logging
# See https://docs.djangoproject.com/en/dev/topics/logging for
# more details on how to customize your logging configuration.
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "%(levelname)s %(asctime)s %(module)s %(process)d %(thread)d %(message)s",
        },
    },
    "handlers": {
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "root": {"level": "INFO", "handlers": ["console"]},
    "loggers": {
        "bautinkit": {"level": env("BAUTINKIT_LOG_LEVEL", default="INFO"), "propagate": True},
    },
}

REDIS_URL = env("REDIS_URL", default="redis://redis:6379/0")
REDIS_SSL = REDIS_URL.startswith("rediss://")

# Celery
# ------------------------------------------------------------------------------
if USE_TZ:
    # https://docs.celeryq.dev/en/stable/userguide/configuration.html#std:setting-timezone
    CELERY_TIMEZONE = TIME_ZONE
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#std:setting-broker_url
CELERY_BROKER_URL = REDIS_URL
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#redis-backend-use-ssl
CELERY_BROKER_USE_SSL = {"ssl_cert_reqs": ssl.CERT_NONE} if REDIS_SSL else None
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#std:setting-result_backend
CELERY_RESULT_BACKEND = REDIS_URL
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#redis-backend-use-ssl
CELERY_REDIS_BACKEND_USE_SSL = CELERY_BROKER_USE_SSL
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#result-extended
CELERY_RESULT_EXTENDED = True
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#result-backend-always-retry
# https://github.com/celery/celery/pull/6122
CELERY_RESULT_BACKEND_ALWAYS_RETRY = True
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#result-backend-max-retries
CELERY_RESULT_BACKEND_MAX_RETRIES = 10
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#std:setting-accept_content
CELERY_ACCEPT_CONTENT = ["json"]
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#std:setting-task_serializer
CELERY_TASK_SERIALIZER = "json"
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#std:setting-result_serializer
CELERY_RESULT_SERIALIZER = "json"
# Sweeps at full sample counts take minutes; a whole cyclicity run can take longer.
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#task-time-limit
CELERY_TASK_TIME_LIMIT = env.int("CELERY_TASK_TIME_LIMIT", default=60 * 60)
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#task-soft-time-limit
CELERY_TASK_SOFT_TIME_LIMIT = env.int("CELERY_TASK_SOFT_TIME_LIMIT", default=55 * 60)
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#worker-send-task-events
CELERY_WORKER_SEND_TASK_EVENTS = True
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#std-setting-task_send_sent_event
CELERY_TASK_SEND_SENT_EVENT = True
# https://docs.celeryq.dev/en/stable/userguide/configuration.html#worker-hijack-root-logger
CELERY_WORKER_HIJACK_ROOT_LOGGER = False

# bautinkit
# ------------------------------------------------------------------------------
# Highest Taylor index examined by the Bautin estimates
BAUTINKIT_K_MAX = env.int("BAUTINKIT_K_MAX", default=64)
# Parameter samples per region
BAUTINKIT_SAMPLES = env.int("BAUTINKIT_SAMPLES", default=256)
BAUTINKIT_SEED = env.int("BAUTINKIT_SEED", default=0)
# Multiplies sampled suprema before they are reported as constants
BAUTINKIT_SAFETY_FACTOR = env.float("BAUTINKIT_SAFETY_FACTOR", default=1.1)
# |a_k(λ)| below this counts as zero
BAUTINKIT_CENTRAL_TOLERANCE = env.float("BAUTINKIT_CENTRAL_TOLERANCE", default=1e-30)
# min|f| below this fraction of max|f| on a contour is a zero on the contour
BAUTINKIT_ZERO_ON_CONTOUR_TOLERANCE = env.float("BAUTINKIT_ZERO_ON_CONTOUR_TOLERANCE", default=1e-12)
BAUTINKIT_WINDING_INITIAL_SAMPLES = env.int("BAUTINKIT_WINDING_INITIAL_SAMPLES", default=64)
BAUTINKIT_WINDING_SAMPLE_CAP = env.int("BAUTINKIT_WINDING_SAMPLE_CAP", default=2**20)
BAUTINKIT_CONTOUR_RETRIES = env.int("BAUTINKIT_CONTOUR_RETRIES", default=5)
# Largest truncation degree tried while the tail is made to dominate
BAUTINKIT_DEGREE_CAP = env.int("BAUTINKIT_DEGREE_CAP", default=512)
# Indicators within this distance of an integer are stable
BAUTINKIT_STABILITY_THRESHOLD = env.float("BAUTINKIT_STABILITY_THRESHOLD", default=0.1)
# Relative growth of a sampled sup under sample doubling still counted as bounded
BAUTINKIT_GROWTH_THRESHOLD = env.float("BAUTINKIT_GROWTH_THRESHOLD", default=0.05)
BAUTINKIT_CHART_DEPTH = env.int("BAUTINKIT_CHART_DEPTH", default=4)
BAUTINKIT_CHART_MAX_EXPONENT = env.int("BAUTINKIT_CHART_MAX_EXPONENT", default=3)
BAUTINKIT_CARTAN_GRID = env.int("BAUTINKIT_CARTAN_GRID", default=257)
BAUTINKIT_RELATIVE_TOLERANCE = env.float("BAUTINKIT_RELATIVE_TOLERANCE", default=1e-9)
BAUTINKIT_BRUDNYI_RADIUS = env.float("BAUTINKIT_BRUDNYI_RADIUS", default=0.05)
# Fan sandwich and global-bound sweeps out to Celery workers
BAUTINKIT_DISTRIBUTE_SWEEPS = env.bool("BAUTINKIT_DISTRIBUTE_SWEEPS", default=False)
BAUTINKIT_SWEEP_CHUNK_SIZE = env.int("BAUTINKIT_SWEEP_CHUNK_SIZE", default=16)
