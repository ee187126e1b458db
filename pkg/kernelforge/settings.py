"""
Settings for kernelforge.

Every tolerance, cap and default that influences a verdict lives here so a
report can echo it. A handful of values can be overridden from the
environment, the rest are fixed for reproducibility.
"""

import os

from kernelforge.exceptions import ConfigurationError

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.abspath(__file__))


def _positive_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ConfigurationError(f"{name} must be >= 1, got {value}")
    return value


# Numerics

# 'lapack' (numpy.linalg.eigh) or 'jacobi' (cyclic Jacobi rotations)
EIGEN_METHOD = os.environ.get('KERNELFORGE_EIGEN', 'lapack')

JACOBI_MAX_N = 512
JACOBI_OFFDIAG_RTOL = 1e-12
JACOBI_MAX_SWEEPS = 100

# PD threshold is PD_TOL_SCALE * max(1, lambda_max); the PSD boundary grows
# with n as PSD_TOL_SCALE * n.
PD_TOL_SCALE = 1e-8
PSD_TOL_SCALE = 1e-10

QUAD_MAX_NODES = 2 ** 20
QUAD_DEFAULT_ACCURACY = 1e-10
QUAD_MIN_LEVELS = 3
# |s| range of the log variable s = log(t)
QUAD_LOG_RANGE = 700.0

GAMMA_MAX_ARG = 171.6
BESSEL_MAX_ORDER = 30.0

RANK_RTOL = 1e-8


# Conditionally negative definite kernels

CND_TOL_SCALE = 1e-10
METRIZABLE_RTOL = 1e-10
RADICAND_CLAMP = 1e-12
EMBED_BASE_INDEX = 0
EMBED_RANK_RTOL = 1e-10

CM_GRID_START = 0.1
CM_GRID_STOP = 10.0
CM_GRID_RATIO = 1.25
CM_PROBE_RTOL = 1e-7
CM_MAX_ORDER = 8
CM_DEFAULT_ORDER = 6


# Families

CLASS_RTOL = 1e-9


# Hyperbolic space

HYPERBOLOID_TOL = 1e-10
HYPERBOLOID_RENORMALIZE = 1e-8
ARCCOSH_SERIES_WIDTH = 1e-8
MINKOWSKI_TOL = 1e-10


# Runtime

THREADS = _positive_int('KERNELFORGE_THREADS', 1)

SEED = 0

SPD_PROBE_TRIALS = 32


# Logging

LOG_LEVEL = os.environ.get('KERNELFORGE_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'kernelforge': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}
