"""Kernel evaluation, Gram assembly and the closure operations."""

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

from kernelforge import settings
from kernelforge.exceptions import InputError, KernelForgeError, KernelTypeError, ParameterError
from kernelforge.numerics import SymMatrix, classify_psd
from .models import (
    Flatten, GramMatrix, KernelSpec, Mixture, Pullback, Rescale, Schur, Tensor,
    as_point,
)

logger = logging.getLogger(__name__)


def _check_domain(spec, point):
    if not spec.accepts(point):
        name = spec.family or spec.op
        raise KernelTypeError(
            f"{type(point).__name__} point is outside the domain of {name!r}")


def evaluate(spec, x, y):
    """K(x, y) with domain checks.

    Arguments are put in canonical order first, so evaluate(spec, x, y) and
    evaluate(spec, y, x) run the same floating point operations.
    """
    x = as_point(x)
    y = as_point(y)
    _check_domain(spec, x)
    _check_domain(spec, y)
    if y.key() < x.key():
        x, y = y, x
    return float(spec.evaluate(x, y))


@contextmanager
def worker_pool(threads=None):
    threads = settings.THREADS if threads is None else threads
    if threads <= 1:
        yield None
        return
    pool = ThreadPoolExecutor(max_workers=threads)
    try:
        yield pool
    finally:
        pool.shutdown()


def _row(spec, points, i):
    values = []
    for j in range(i, len(points)):
        try:
            values.append(evaluate(spec, points[i], points[j]))
        except KernelForgeError as exc:
            exc.pair = (i, j)
            raise
    return values


def gram(spec, points, classify=False, threads=None):
    """Interpolation matrix [K(x_i, x_j)].

    Each unordered pair is evaluated once and mirrored. Rows may be spread
    over a thread pool; the result does not depend on the partitioning.
    """
    points = tuple(as_point(p) for p in points)
    n = len(points)
    if n == 0:
        raise InputError("gram needs at least one point")
    for i, p in enumerate(points):
        try:
            _check_domain(spec, p)
        except KernelTypeError as exc:
            exc.pair = (i, i)
            raise
    logger.debug("assembling %dx%d gram", n, n)
    entries = np.zeros((n, n))
    with worker_pool(threads) as pool:
        if pool is None:
            rows = [_row(spec, points, i) for i in range(n)]
        else:
            rows = list(pool.map(lambda i: _row(spec, points, i), range(n)))
    for i, values in enumerate(rows):
        entries[i, i:] = values
    matrix = SymMatrix(entries)
    verdict = classify_psd(matrix) if classify else None
    return GramMatrix(points, matrix, verdict, _sample_checks(spec, points))


def _sample_checks(spec, points):
    """Sample checks of every node in the tree that takes these points."""
    if not all(spec.accepts(p) for p in points):
        return ()
    found = tuple(spec.sample_checks(points))
    for child in spec.children():
        found += _sample_checks(child, points)
    return found


def cross_gram(spec, xs, ys):
    """Rectangular matrix [K(x_i, y_j)]."""
    xs = [as_point(p) for p in xs]
    ys = [as_point(p) for p in ys]
    out = np.empty((len(xs), len(ys)))
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            try:
                out[i, j] = evaluate(spec, x, y)
            except KernelForgeError as exc:
                exc.pair = (i, j)
                raise
    return out


def spec_digest(spec):
    """Short stable identifier of a kernel spec."""
    text = json.dumps(spec.to_dict(), sort_keys=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


def _require_spec(name, value):
    if not isinstance(value, KernelSpec):
        raise ParameterError(f"{name} must be a kernel spec, got {type(value).__name__}")


def schur(left, right):
    _require_spec('left', left)
    _require_spec('right', right)
    return Schur(left, right)


def tensor(left, right):
    _require_spec('left', left)
    _require_spec('right', right)
    return Tensor(left, right)


def rescale(inner, weight):
    _require_spec('inner', inner)
    if not (callable(weight) and hasattr(weight, 'accepts')):
        raise ParameterError("rescale needs a weight descriptor")
    return Rescale(inner, weight)


def pullback(inner, map):
    _require_spec('inner', inner)
    if not (callable(map) and hasattr(map, 'accepts')):
        raise ParameterError("pullback needs a map descriptor")
    return Pullback(inner, map)


def mixture(atoms):
    atoms = tuple(atoms)
    for _, k in atoms:
        _require_spec('mixture atom', k)
    return Mixture(atoms)


def flatten(matrix_kernel):
    if getattr(matrix_kernel, 'size', 0) < 1:
        raise ParameterError("flatten needs a matrix kernel with l >= 1")
    return Flatten(matrix_kernel)
