"""
Geometry of the hyperboloid model and the hyperbolic / log-conditional
kernel predicates.

A kernel beta is hyperbolic when beta(x, x) = 1 and
beta(x, z) beta(y, z) - beta(x, y) is positive definite for one (hence
every) pivot z. L >= 1 is log-conditional when log L is CND.
"""

import logging
import math

import numpy as np

from kernelforge import settings
from kernelforge.cnd import check_cnd, check_metrizable, gamma_matrix
from kernelforge.core import Euclidean, KernelSpec, gram
from kernelforge.exceptions import DomainError, InputError, ParameterError
from kernelforge.numerics import SymMatrix, as_sym_matrix, classify_psd
from kernelforge.reports import ClassReport
from .models import (
    HyperboloidPoint, InverseLogConditional, Isotropic, IsotropicAtoms,
    MinkowskiForm, SechPower, minkowski_value,
)

logger = logging.getLogger(__name__)


def lift(x):
    """Chart point x in R^m to (x, sqrt(1 + |x|^2))."""
    coords = x.coords if isinstance(x, Euclidean) else tuple(float(c) for c in x)
    t = math.sqrt(1.0 + math.fsum(c * c for c in coords))
    return HyperboloidPoint(coords, t)


def project(z):
    return tuple(z.x)


def minkowski_form(z, w):
    return minkowski_value(z, w)


def minkowski_gram(points):
    return gram(MinkowskiForm(), points).matrix


def arccosh(s):
    s = float(s)
    if s < 1.0:
        raise DomainError(f"arccosh needs s >= 1, got {s}")
    e = s - 1.0
    if e <= settings.ARCCOSH_SERIES_WIDTH:
        # arccosh(1 + e) = sqrt(2e) (1 - e/12 + 3e^2/160 - ...)
        return math.sqrt(2.0 * e) * (1.0 - e / 12.0 + 3.0 * e * e / 160.0)
    if s > 1e150:
        return math.log(2.0) + math.log(s)
    return math.log(s + math.sqrt((s - 1.0) * (s + 1.0)))


def hyperbolic_distance(z, w):
    return arccosh(minkowski_value(z, w))


def sech_power_kernel(r):
    return SechPower(r)


def isotropic_kernel(atoms):
    kernel = Isotropic(atoms if isinstance(atoms, IsotropicAtoms) else IsotropicAtoms(tuple(atoms)))
    if not kernel.strict:
        logger.info("isotropic kernel is constant; it is not strictly positive definite")
    return kernel


def check_hyperbolic(beta, points=None, tol=None):
    """Hyperbolicity of beta on a sample, tested at every pivot."""
    b = gamma_matrix(beta, points)
    n = b.n
    if n < 2:
        raise InputError("hyperbolicity needs n >= 2")
    tol = settings.MINKOWSKI_TOL * max(1.0, b.max_abs) if tol is None else tol
    entries = b.entries
    diag = np.diag(entries)
    off = np.flatnonzero(np.abs(diag - 1.0) > tol)
    if off.size:
        return ClassReport(
            'hyperbolic', False, witness={'diagonal': int(off[0])},
            tolerances={'diagonal': tol}, details={'diagonal_ok': False})
    worst = None
    tol_used = 0.0
    for z in range(n):
        column = entries[:, z]
        m = np.outer(column, column) - entries
        verdict = classify_psd(SymMatrix(m))
        tol_used = max(tol_used, verdict.tol_used)
        if not verdict.is_psd:
            logger.debug("pivot %d fails with lambda_min %.3e", z, verdict.lambda_min)
            if worst is None:
                worst = (z, verdict.lambda_min)
    return ClassReport(
        'hyperbolic', worst is None,
        witness=None if worst is None else {'pivot': worst[0], 'lambda_min': worst[1]},
        tolerances={'diagonal': tol, 'psd': tol_used},
        details={'diagonal_ok': True, 'pivots': n})


def _log_matrix(l_matrix, tol):
    entries = l_matrix.entries
    scale = max(1.0, l_matrix.max_abs)
    tol = settings.MINKOWSKI_TOL * scale if tol is None else tol
    low = np.argwhere(entries < 1.0 - tol)
    if low.size:
        i, j = (int(v) for v in low[0])
        raise DomainError(f"L({i}, {j}) = {entries[i, j]!r} is below 1")
    return SymMatrix(np.log(np.maximum(entries, 1.0))), tol


def check_log_conditional(l_kernel, points=None, tol=None):
    """log L is CND; metrizability of log L is reported alongside."""
    logs, tol = _log_matrix(gamma_matrix(l_kernel, points), tol)
    cnd = check_cnd(logs)
    metric = check_metrizable(logs)
    return ClassReport(
        'log-conditional', cnd.is_cnd,
        witness=None if cnd.is_cnd else cnd.witness_weights,
        tolerances={'domain': tol, 'cnd': cnd.tol_used, **metric.tolerances},
        details={'lambda_max_projected': cnd.lambda_max_projected,
                 'metrizable': metric.verdict, 'metrizable_witness': metric.witness})


def inverse_kernel(l_kernel):
    if not isinstance(l_kernel, KernelSpec):
        raise ParameterError("inverse_kernel needs a kernel spec L")
    return InverseLogConditional(l_kernel)


def hilbert_distance(l_matrix):
    """sqrt(log L), the distance induced by a log-conditional L."""
    logs, _ = _log_matrix(as_sym_matrix(l_matrix), None)
    return np.sqrt(logs.entries)


def hyperbolic_from_hilbert(d):
    """arccosh(exp(d^2)), inverse of d = sqrt(log cosh d_H)."""
    d = np.asarray(d, dtype=float)
    out = np.vectorize(lambda v: arccosh(math.exp(v * v)))(d)
    return float(out) if out.ndim == 0 else out


def power_matrix(l_matrix, r):
    """Entrywise L^r."""
    r = float(r)
    if not (math.isfinite(r) and r > 0):
        raise ParameterError(f"power needs r > 0, got {r}")
    return SymMatrix(np.power(as_sym_matrix(l_matrix).entries, r))


def beta_from_cnd(gamma, tol=None):
    """1 + gamma for a CND matrix with zero diagonal."""
    g = as_sym_matrix(gamma)
    tol = settings.MINKOWSKI_TOL * max(1.0, g.max_abs) if tol is None else tol
    if np.any(np.abs(np.diag(g.entries)) > tol):
        raise ParameterError("beta_from_cnd needs gamma with zero diagonal")
    return SymMatrix(1.0 + g.entries)
