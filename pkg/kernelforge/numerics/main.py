"""Dense symmetric eigensolves, special functions and matrix rank."""

import logging
import math

import numpy as np
import scipy.special

from kernelforge import settings
from kernelforge.exceptions import (
    DomainError, InputError, NumericalError, ParameterError, RangeError,
)
from .models import PsdClass, PsdVerdict, Spectrum, as_sym_matrix

logger = logging.getLogger(__name__)


def _jacobi(a, vectors):
    """Cyclic Jacobi rotations with a fixed row-major sweep order."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n) if vectors else None
    frobenius = np.linalg.norm(a)
    target = settings.JACOBI_OFFDIAG_RTOL * frobenius
    for sweep in range(settings.JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= target:
            logger.debug("jacobi converged after %d sweeps (n=%d)", sweep, n)
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                if vectors:
                    vec_p = v[:, p].copy()
                    vec_q = v[:, q].copy()
                    v[:, p] = c * vec_p - s * vec_q
                    v[:, q] = s * vec_p + c * vec_q
    else:
        raise NumericalError(
            f"jacobi did not converge in {settings.JACOBI_MAX_SWEEPS} sweeps",
            partial=np.sort(np.diag(a)),
        )
    return np.diag(a).copy(), v


def sym_eigen(a, vectors=False, method=None):
    """Eigenvalues (ascending) and optionally orthonormal eigenvectors.

    ``method`` is 'jacobi' or 'lapack'; the default comes from
    ``settings.EIGEN_METHOD``.
    """
    a = as_sym_matrix(a)
    method = method or settings.EIGEN_METHOD
    if a.n == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0)) if vectors else None)
    if method == 'jacobi':
        if a.n > settings.JACOBI_MAX_N:
            raise InputError(
                f"jacobi solver is limited to n <= {settings.JACOBI_MAX_N}")
        values, vecs = _jacobi(a.entries, vectors)
    elif method == 'lapack':
        if vectors:
            values, vecs = np.linalg.eigh(a.entries)
        else:
            values, vecs = np.linalg.eigvalsh(a.entries), None
    else:
        raise ParameterError(f"unknown eigen method {method!r}")
    order = np.argsort(values, kind='stable')
    values = values[order]
    if vecs is not None:
        vecs = vecs[:, order]
    return Spectrum(values, vecs)


def default_tol_scale(n):
    return settings.PSD_TOL_SCALE * n


def classify_psd(a, tol_scale=None, spectrum=None, pd_scale=None):
    """PD / PSD / INDEFINITE from the spectrum.

    tol_used = tol_scale * max(1, lambda_max) bounds the PSD band, with
    tol_scale defaulting to PSD_TOL_SCALE * n. PD needs lambda_min above
    pd_tol = max(pd_scale * max(1, lambda_max), tol_used), with pd_scale
    defaulting to PD_TOL_SCALE.
    """
    a = as_sym_matrix(a)
    if a.n == 0:
        raise InputError("cannot classify an empty matrix")
    if tol_scale is None:
        tol_scale = default_tol_scale(a.n)
    if pd_scale is None:
        pd_scale = settings.PD_TOL_SCALE
    if tol_scale <= 0 or pd_scale <= 0:
        raise ParameterError(
            f"tolerance scales must be positive, got {tol_scale} and {pd_scale}")
    if spectrum is None:
        spectrum = sym_eigen(a)
    lambda_min = spectrum.lambda_min
    lambda_max = spectrum.lambda_max
    scale = max(1.0, lambda_max)
    tol_used = tol_scale * scale
    pd_tol = max(pd_scale * scale, tol_used)
    if lambda_min > pd_tol:
        psd_class = PsdClass.PD
    elif lambda_min < -tol_used:
        psd_class = PsdClass.INDEFINITE
    else:
        psd_class = PsdClass.PSD
        if lambda_min < 0:
            logger.info("PSD within tolerance: lambda_min %.3e, tol %.3e", lambda_min, tol_used)
    return PsdVerdict(psd_class, lambda_min, lambda_max, tol_used, pd_tol)


def gamma_fn(x):
    """Euler's Gamma function on x > 0."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"gamma_fn needs x > 0, got {x}")
    if x > settings.GAMMA_MAX_ARG:
        raise RangeError(f"gamma_fn overflows for x = {x}")
    value = float(scipy.special.gamma(x))
    if not math.isfinite(value):
        raise RangeError(f"gamma_fn overflows for x = {x}")
    return value


def _half_integer_k(n, z):
    # K_{n+1/2}(z) = sqrt(pi / 2z) e^{-z} sum_k (n+k)! / (k! (n-k)! (2z)^k)
    total = 0.0
    for k in range(n + 1):
        term = math.factorial(n + k) / (math.factorial(k) * math.factorial(n - k))
        total += term / (2.0 * z) ** k
    return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z) * total


def bessel_k(nu, z):
    """Modified Bessel function of the second kind K_nu(z)."""
    nu = abs(float(nu))
    z = float(z)
    if not z > 0:
        raise DomainError(f"bessel_k needs z > 0, got {z}")
    if nu > settings.BESSEL_MAX_ORDER:
        raise ParameterError(
            f"bessel_k order must be <= {settings.BESSEL_MAX_ORDER}, got {nu}")
    twice = 2.0 * nu
    if twice == round(twice) and int(round(twice)) % 2 == 1:
        return _half_integer_k(int(round(nu - 0.5)), z)
    value = float(scipy.special.kv(nu, z))
    if not math.isfinite(value):
        raise RangeError(f"bessel_k overflows at nu={nu}, z={z}")
    return value


def singular_values(m):
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise InputError("matrix has non-finite entries")
    return np.linalg.svd(m, compute_uv=False)


def numerical_rank(m, rtol=None):
    """Number of singular values above rtol times the largest one."""
    rtol = settings.RANK_RTOL if rtol is None else rtol
    sv = singular_values(m)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))
