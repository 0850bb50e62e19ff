"""
Django settings for the WeakTime project.

WeakTime has no database and no web surface: Django provides the settings
layer, logging configuration, management commands and the test runner.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/
"""

from pathlib import Path
import os
from django.core.exceptions import ImproperlyConfigured
from dotenv import load_dotenv
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent
LOG_DIR = os.path.join(BASE_DIR, 'logs')

# Ensure log directory exists
os.makedirs(LOG_DIR, exist_ok=True)

SECRET_KEY = os.getenv('SECRET_KEY', 'weaktime-local-only')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

PROD = not DEBUG

INSTALLED_APPS = [
    "rest_framework",

    # Custom apps
    "qcore",
    "model",
    "timefunc",
    "twolevel",
    "oracle",
    "cli",
]

# No persistence: scenarios come from flat files and results go to CSV.
DATABASES = {}

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True


def _threads_from_env():
    raw = os.getenv('WEAKTIME_THREADS', '1')
    try:
        threads = int(raw)
    except ValueError:
        threads = 0
    if threads < 1:
        raise ImproperlyConfigured(f"WEAKTIME_THREADS must be a positive integer, got {raw!r}")
    return threads


# Numerical tolerances and defaults (hbar = 1 throughout)
WEAKTIME = {
    'P_MIN': float(os.getenv('WEAKTIME_P_MIN', '1e-10')),
    'DEFINITENESS_THRESHOLD': float(os.getenv('WEAKTIME_DEFINITENESS_THRESHOLD', '1e-9')),
    'HERMITIAN_TOL': 1e-10,
    'PROJECTOR_TOL': 1e-9,
    'STATE_TOL': 1e-10,
    'IMAG_RESIDUE_TOL': 1e-10,
    'QUADRATURE_MIN_SAMPLES': 200,
    'QUADRATURE_POINTS_PER_PERIOD': 20,
    'THREADS': _threads_from_env(),
    'DETECTOR': {
        'Q': 16.0,
        'N': 512,
        'SIGMA': 1.0,
    },
    'FIGURE_T_MAX': 10.0,
    'FIGURE_SAMPLES': 1000,
    'CSV_SIGNIFICANT_DIGITS': 17,
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'filters': {
        'command_context': {
            '()': 'WeakTime.logging_filters.CommandContextFilter',
        },
    },
    'formatters': {
        'json': {
            '()': 'pythonjsonlogger.json.JsonFormatter',
            'format': '%(levelname)s %(asctime)s %(module)s %(message)s %(name)s %(process)d %(thread)d %(command)s %(scenario)s %(run_id)s',
            'json_ensure_ascii': False,
            'json_indent': None,
        },
        'verbose': {
            'format': '%(levelname)s [%(asctime)s] %(name)s - %(module)s.%(funcName)s:%(lineno)d - %(message)s',
            'datefmt': '%Y-%m-%d %H:%M:%S',
        },
        'simple': {
            'format': '%(levelname)s [%(asctime)s] %(command)s %(scenario)s - %(message)s',
            'datefmt': '%Y-%m-%d %H:%M:%S',
        },
    },
    'handlers': {
        # StreamHandler writes to stderr; stdout carries CSV.
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple' if not PROD else 'json',
            'filters': ['command_context'],
            'level': 'DEBUG' if DEBUG else 'WARNING',
        },
        'file': {
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': os.path.join(LOG_DIR, 'weaktime.log'),
            'formatter': 'verbose' if not PROD else 'json',
            'filters': ['command_context'],
            'maxBytes': 100 * 1024 * 1024,  # 100 MB
            'backupCount': 5,
            'delay': True,
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
    },
    'root': {
        'handlers': ['console', 'file'],
        'level': 'DEBUG' if DEBUG else 'INFO',
    },
}
