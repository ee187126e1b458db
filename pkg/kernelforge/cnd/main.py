"""
Conditionally negative definite kernels.

Predicates work on a finite sample: either a kernel spec together with the
points, or the already assembled matrix [gamma(x_i, x_j)].
"""

import logging
import math

import numpy as np

from kernelforge import settings
from kernelforge.core import KernelSpec, as_point, evaluate, gram
from kernelforge.exceptions import (
    DuplicatePointError, InputError, MetrizabilityError, NotCndError,
    NumericalError, ParameterError,
)
from kernelforge.numerics import PsdClass, as_sym_matrix, classify_psd, sym_eigen
from kernelforge.reports import ClassReport
from .models import (
    CmComposition, CndReport, Embedding, MonotonicityReport, SchoenbergTransform,
)

logger = logging.getLogger(__name__)


def _check_distinct(points):
    seen = {}
    for i, p in enumerate(points):
        if p in seen:
            raise DuplicatePointError(
                f"points {seen[p]} and {i} coincide", indices=(seen[p], i))
        seen[p] = i


def gamma_matrix(gamma, points=None):
    """The matrix [gamma(x_i, x_j)] as a SymMatrix."""
    if isinstance(gamma, KernelSpec):
        if points is None:
            raise InputError("a kernel spec needs points")
        return gram(gamma, points).matrix
    return as_sym_matrix(gamma)


def check_cnd(gamma, points=None, tol=None):
    """Largest eigenvalue of gamma restricted to the hyperplane sum c = 0."""
    g = gamma_matrix(gamma, points)
    n = g.n
    if n < 2:
        raise InputError("conditional negative definiteness needs n >= 2")
    if tol is None:
        tol = settings.CND_TOL_SCALE * n * max(1.0, g.max_abs)
    p = np.eye(n) - np.full((n, n), 1.0 / n)
    projected = p @ g.entries @ p
    spectrum = sym_eigen(projected, vectors=True)
    lambda_max = spectrum.lambda_max
    if lambda_max <= tol:
        return CndReport(True, lambda_max, tol)
    witness = p @ spectrum.eigenvectors[:, -1]
    witness = witness / np.linalg.norm(witness)
    nonzero = np.flatnonzero(np.abs(witness) > 1e-12)
    if nonzero.size and witness[nonzero[0]] < 0:
        witness = -witness
    logger.debug("not CND: projected lambda_max %.3e > %.3e", lambda_max, tol)
    return CndReport(False, lambda_max, tol, witness)


def check_metrizable(gamma, points=None, tol=None):
    """2 gamma(x, y) > gamma(x, x) + gamma(y, y) for every distinct pair."""
    if points is not None:
        points = [as_point(p) for p in points]
        _check_distinct(points)
    g = gamma_matrix(gamma, points)
    if tol is None:
        tol = settings.METRIZABLE_RTOL * max(1.0, g.max_abs)
    a = g.entries
    for i in range(g.n):
        for j in range(i + 1, g.n):
            gap = 2.0 * a[i, j] - a[i, i] - a[j, j]
            if not gap > tol:
                return ClassReport(
                    'metrizable', False, witness=(i, j),
                    tolerances={'tol': tol}, details={'gap': gap})
    return ClassReport('metrizable', True, tolerances={'tol': tol})


def schoenberg_transform(gamma, t):
    if not isinstance(gamma, KernelSpec):
        raise ParameterError("schoenberg_transform needs a kernel spec")
    return SchoenbergTransform(gamma, t)


def _radicand_distance(gxy, gxx, gyy):
    radicand = gxy - 0.5 * (gxx + gyy)
    clamp = settings.RADICAND_CLAMP * max(1.0, abs(gxy), abs(gxx), abs(gyy))
    if radicand < -clamp:
        raise MetrizabilityError(
            f"gamma(x, y) - gamma(x, x)/2 - gamma(y, y)/2 = {radicand:.3e} is negative")
    return math.sqrt(max(radicand, 0.0))


def induced_distance(gamma, x, y):
    """D(x, y) = sqrt(gamma(x, y) - gamma(x, x)/2 - gamma(y, y)/2)."""
    x = as_point(x)
    y = as_point(y)
    return _radicand_distance(
        evaluate(gamma, x, y), evaluate(gamma, x, x), evaluate(gamma, y, y))


def induced_distance_matrix(gamma, points=None):
    g = gamma_matrix(gamma, points).entries
    n = g.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = _radicand_distance(g[i, j], g[i, i], g[j, j])
    return out


def embed(gamma, points=None, base_index=None, tol=None):
    """Coordinates h_i and f_i with gamma_ij = |h_i - h_j|^2 + f_i + f_j.

    Built from the Gram matrix of h centred at the base point,
    1/2 [gamma_i0 + gamma_j0 - gamma_ij - gamma_00].
    """
    g = gamma_matrix(gamma, points)
    a = g.entries
    n = g.n
    base = settings.EMBED_BASE_INDEX if base_index is None else int(base_index)
    if not 0 <= base < max(n, 1):
        raise InputError(f"base index {base} out of range for n = {n}")
    f = np.diag(a) / 2.0
    if n == 1:
        return Embedding(np.zeros((1, 0)), f, base, 0, 0.0)

    report = check_cnd(g, tol=tol)
    if not report.is_cnd:
        raise NotCndError(
            f"gamma is not conditionally negative definite "
            f"(projected lambda_max {report.lambda_max_projected:.3e})",
            lambda_max=report.lambda_max_projected)

    inner = 0.5 * (a[:, [base]] + a[[base], :] - a - a[base, base])
    verdict = classify_psd(inner)
    if verdict.psd_class is PsdClass.INDEFINITE:
        raise NotCndError(
            f"centred Gram is indefinite (lambda_min {verdict.lambda_min:.3e})",
            lambda_max=report.lambda_max_projected)
    spectrum = sym_eigen(inner, vectors=True)
    values = spectrum.eigenvalues[::-1]
    vectors = spectrum.eigenvectors[:, ::-1]
    top = max(values[0], 0.0)
    rank = int(np.sum(values > settings.EMBED_RANK_RTOL * top)) if top > 0 else 0
    vectors = vectors[:, :rank].copy()
    for k in range(rank):
        pivot = np.argmax(np.abs(vectors[:, k]))
        if vectors[pivot, k] < 0:
            vectors[:, k] = -vectors[:, k]
    coords = vectors * np.sqrt(values[:rank])
    coords[base, :] = 0.0

    embedding = Embedding(coords, f, base, rank)
    scale = g.max_abs
    error = float(np.max(np.abs(embedding.reconstruct() - a)))
    if scale > 0:
        error /= scale
    logger.debug("embedded %d points in rank %d, relative error %.3e", n, rank, error)
    return Embedding(coords, f, base, rank, error)


def geometric_grid(start=None, stop=None, ratio=None):
    start = settings.CM_GRID_START if start is None else float(start)
    stop = settings.CM_GRID_STOP if stop is None else float(stop)
    ratio = settings.CM_GRID_RATIO if ratio is None else float(ratio)
    if not (0 < start < stop) or not ratio > 1:
        raise ParameterError("grid needs 0 < start < stop and ratio > 1")
    count = int(math.floor(math.log(stop / start) / math.log(ratio) + 1e-9))
    return tuple(start * ratio ** k for k in range(count + 1))


def _divided_differences(grid, values, order):
    x = np.asarray(grid)
    table = [np.asarray(values, dtype=float)]
    for k in range(1, order + 1):
        prev = table[-1]
        table.append((prev[1:] - prev[:-1]) / (x[k:] - x[:-k]))
    return table


def _probe_grid(f, grid, order):
    grid = geometric_grid() if grid is None else tuple(float(t) for t in grid)
    if order > settings.CM_MAX_ORDER + 1 or order < 0:
        raise ParameterError(f"order must be in 0..{settings.CM_MAX_ORDER}")
    if len(grid) <= order:
        raise ParameterError(f"grid needs more than {order} points")
    if any(t <= 0 for t in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ParameterError("grid must be positive and strictly ascending")
    values = np.asarray(f(np.asarray(grid)), dtype=float)
    if not np.all(np.isfinite(values)):
        raise NumericalError("function is not finite on the grid")
    return grid, values


def _collect(grid, table, orders, sign, tol):
    violations = []
    for k in orders:
        signed = sign(k) * table[k]
        for i in np.flatnonzero(signed < -tol):
            violations.append((k, grid[i], float(signed[i])))
    return tuple(violations)


def probe_completely_monotone(f, grid=None, order=None):
    """(-1)^k times the k-th divided difference of f must be >= -tol.

    A necessary condition only: a pass does not prove complete monotonicity.
    """
    order = settings.CM_DEFAULT_ORDER if order is None else int(order)
    if order > settings.CM_MAX_ORDER:
        raise ParameterError(f"order must be <= {settings.CM_MAX_ORDER}")
    grid, values = _probe_grid(f, grid, order)
    tol = settings.CM_PROBE_RTOL * max(float(np.max(np.abs(values))), 1e-300)
    table = _divided_differences(grid, values, order)
    violations = _collect(grid, table, range(order + 1), lambda k: (-1) ** k, tol)
    return MonotonicityReport('completely_monotone', order, grid, violations, tol)


def probe_bernstein(g, grid=None, order=None):
    """g >= 0 and g' completely monotone up to ``order``, on a grid."""
    order = settings.CM_DEFAULT_ORDER if order is None else int(order)
    if order > settings.CM_MAX_ORDER:
        raise ParameterError(f"order must be <= {settings.CM_MAX_ORDER}")
    grid, values = _probe_grid(g, grid, order + 1)
    tol = settings.CM_PROBE_RTOL * max(float(np.max(np.abs(values))), 1e-300)
    table = _divided_differences(grid, values, order + 1)
    violations = _collect(grid, table, [0], lambda k: 1, tol)
    violations += _collect(grid, table, range(1, order + 2), lambda k: (-1) ** (k - 1), tol)
    return MonotonicityReport('bernstein', order, grid, violations, tol)


def cm_compose(gamma, function):
    if not isinstance(gamma, KernelSpec):
        raise ParameterError("cm_compose needs a kernel spec")
    return CmComposition(gamma, function)


def classify_schoenberg(gamma, points=None, tol=None):
    """exp(-gamma) is SPD on the sample iff gamma is metrizable there.

    ISPD additionally asks for gamma(x, x) bounded below, which a finite
    sample always satisfies; the observed minimum is reported.
    """
    g = gamma_matrix(gamma, points)
    cnd = check_cnd(g, tol=tol)
    if not cnd.is_cnd:
        return ClassReport(
            'schoenberg', False, witness=cnd.witness_weights,
            tolerances={'cnd': cnd.tol_used},
            details={'cnd': False, 'lambda_max_projected': cnd.lambda_max_projected})
    metric = check_metrizable(g, tol=tol)
    diagonal_min = float(np.min(np.diag(g.entries)))
    return ClassReport(
        'schoenberg', metric.verdict, witness=metric.witness,
        tolerances={'cnd': cnd.tol_used, 'metrizable': metric.tolerances['tol']},
        details={
            'cnd': True, 'spd': metric.verdict, 'ispd': metric.verdict,
            'diagonal_min': diagonal_min,
        })


def classify_cm_composition(gamma, function, points=None, tol=None):
    """f(gamma) is ISPD on the sample when f is a non-constant completely
    monotone function and gamma is a nonnegative metrizable CND kernel."""
    g = gamma_matrix(gamma, points)
    if float(np.min(g.entries)) < 0:
        raise ParameterError("cm composition needs gamma >= 0")
    probe = probe_completely_monotone(function)
    cnd = check_cnd(g, tol=tol)
    metric = check_metrizable(g, tol=tol)
    constant = bool(getattr(function, 'constant', False))
    verdict = probe.passed and not constant and cnd.is_cnd and metric.verdict
    witness = metric.witness if not metric.verdict else None
    return ClassReport(
        'cm_composition', verdict, witness=witness,
        tolerances={'cnd': cnd.tol_used, 'metrizable': metric.tolerances['tol'],
                    'probe': probe.tol_used},
        details={
            'completely_monotone': probe.passed, 'constant': constant,
            'cnd': cnd.is_cnd, 'metrizable': metric.verdict,
        })
