"""Constructors and classifiers for the concrete kernel families."""

import logging
import math

import numpy as np
import scipy.special

from kernelforge import settings
from kernelforge.cnd import check_cnd, check_metrizable, probe_bernstein, probe_completely_monotone
from kernelforge.core import KernelSpec, Product, as_point, gram
from kernelforge.core.descriptors import (
    AffineFunction, ExpDecay, LogShift, PowerDecay, PowerShift,
)
from kernelforge.exceptions import (
    DomainError, IllConditionedError, InputError, ParameterError, PreconditionError,
)
from kernelforge.numerics import (
    SymMatrix, bessel_k, classify_psd, quad_semi_infinite,
    singular_values,
)
from kernelforge.reports import ClassReport
from .matrix import (
    GammaPowerMatrix, MaternHilbertMatrix, MaternProductMatrix, MatrixKernel,
)
from .models import (
    Gaussian, GneitingClassic, GneitingGeneral, GneitingSpec,
    MatrixGaussianReport, RadialCmMixture,
)

logger = logging.getLogger(__name__)


def gaussian(sigma):
    return Gaussian(sigma)


def radial_cm_mixture(atoms):
    kernel = RadialCmMixture(tuple(atoms))
    if not kernel.strict:
        logger.info("radial mixture has all its mass at r = 0; it is not strict")
    return kernel


def _unbounded(g):
    if isinstance(g, AffineFunction):
        return g.slope > 0
    if isinstance(g, PowerShift):
        return g.rate > 0 and g.beta > 0
    return isinstance(g, LogShift)


def _vanishes(psi):
    if isinstance(psi, ExpDecay):
        return psi.rate > 0
    if isinstance(psi, PowerDecay):
        return psi.rate > 0 and psi.tau > 0
    return False


def _classic_construction(g, psi, m):
    g_probe = probe_bernstein(g)
    psi_probe = probe_completely_monotone(psi)
    g0 = g(0.0)
    checks = {
        'g_bernstein': g_probe.passed,
        'psi_completely_monotone': psi_probe.passed,
        'g_positive': g0 > 0,
        'nonconstant': not (getattr(g, 'constant', False) or getattr(psi, 'constant', False)),
    }
    verdict = all(checks.values())
    if not verdict:
        failed = sorted(k for k, v in checks.items() if not v)
        logger.warning("classic Gneiting construction probes failed: %s", ', '.join(failed))
    details = dict(checks)
    details['c0_universal'] = _unbounded(g) and _vanishes(psi)
    details['g_violations'] = len(g_probe.violations)
    details['psi_violations'] = len(psi_probe.violations)
    return ClassReport(
        'gneiting_construction', verdict,
        tolerances={'g_probe': g_probe.tol_used, 'psi_probe': psi_probe.tol_used},
        details=details)


def gneiting(spec):
    """Kernel on Product points from a :class:`GneitingSpec`.

    Classic specs are probed; a failing probe is logged and recorded in
    ``kernel.construction`` but evaluation stays allowed. General specs get
    their C condition checked on the sites of every assembled Gram, see
    ``GramMatrix.checks``.
    """
    if not isinstance(spec, GneitingSpec):
        raise ParameterError("gneiting needs a GneitingSpec")
    if spec.variant == 'classic':
        report = _classic_construction(spec.g, spec.psi, spec.m)
        return GneitingClassic(spec.g, spec.psi, spec.m, construction=report)
    return GneitingGeneral(spec.a, spec.gamma, spec.m)


def _sites(sites):
    sites = [as_point(s) for s in sites]
    if not sites:
        raise InputError("need at least one site")
    return sites


def _metrizable_on(gamma, sites, tol):
    if len(sites) < 2:
        return ClassReport('metrizable', True)
    return check_metrizable(gamma, sites, tol)


def probe_c_condition(kernel, sites, tol_scale=None):
    """PSD verdict of the C kernel assembled on the given sites.

    C(u, v) = A(u, v) gamma(u, v)^(m/2) for the general Gneiting kernel and
    the channel weighted analogues for the matrix Matern kernels.
    """
    sites = _sites(sites)
    if isinstance(kernel, GneitingGeneral):
        size = 1
    elif isinstance(kernel, (MaternProductMatrix, MaternHilbertMatrix)):
        size = kernel.size
    else:
        raise ParameterError(f"no C condition for {type(kernel).__name__}")
    entry = kernel.c_entry
    n = len(sites)
    matrix = np.zeros((n * size, n * size))
    for p in range(n):
        for q in range(p, n):
            for i in range(size):
                for j in range(size):
                    value = entry(i, j, sites[p], sites[q])
                    matrix[p * size + i, q * size + j] = value
                    matrix[q * size + j, p * size + i] = value
    verdict = classify_psd(SymMatrix(matrix), tol_scale)
    if not verdict.is_psd:
        logger.warning("C condition fails on %d sites (lambda_min %.3e)", n, verdict.lambda_min)
    return ClassReport(
        'c_condition', verdict.is_psd, witness=None if verdict.is_psd else verdict.lambda_min,
        tolerances={'tol_used': verdict.tol_used}, details={'verdict': verdict})


def classify_gneiting_general(kernel, sites, tol=None):
    """SPD on X x R^m iff gamma is metrizable and A(u, u) > 0."""
    if not isinstance(kernel, GneitingGeneral):
        raise ParameterError("classify_gneiting_general needs a GneitingGeneral kernel")
    sites = _sites(sites)
    metric = _metrizable_on(kernel.gamma, sites, tol)
    c_probe = probe_c_condition(kernel, sites)
    witness = metric.witness
    for k, u in enumerate(sites):
        if not kernel.a.evaluate(u, u) > 0:
            witness = witness if witness is not None else (k,)
            positive = False
            break
    else:
        positive = True
    return ClassReport(
        'gneiting_general_spd', metric.verdict and positive, witness=witness,
        tolerances=dict(metric.tolerances),
        details={'metrizable': metric.verdict, 'diagonal_positive': positive,
                 'c_condition': c_probe.verdict})


def matern(r, params):
    """2^(1-nu) (alpha r)^nu K_nu(alpha r) / Gamma(nu); exactly 1 at r = 0."""
    r = float(r)
    if r < 0 or not math.isfinite(r):
        raise DomainError(f"matern needs r >= 0, got {r}")
    if r == 0.0:
        return 1.0
    nu = params.nu
    z = params.alpha * r
    k = bessel_k(nu, z)
    if k == 0.0:
        return 0.0
    log_value = ((1.0 - nu) * math.log(2.0) + nu * math.log(z) + math.log(k)
                 - scipy.special.gammaln(nu))
    return math.exp(log_value)


def matern_oracle(r, params, accuracy=1e-12):
    """Quadrature of the scale mixture

        int_0^inf e^(-r^2 t) (alpha^2/4)^nu t^(-1-nu) e^(-alpha^2 / 4t) / Gamma(nu) dt.

    The integrand is scaled by e^(alpha r) so the integral stays of order
    one for large r.
    """
    r = float(r)
    if r < 0 or not math.isfinite(r):
        raise DomainError(f"matern_oracle needs r >= 0, got {r}")
    alpha = params.alpha
    nu = params.nu
    a = alpha * alpha / 4.0
    shift = alpha * r
    log_norm = nu * math.log(a) - scipy.special.gammaln(nu)

    def integrand(t):
        log_t = np.log(t)
        return np.exp(log_norm - (1.0 + nu) * log_t - a / t - r * r * t + shift)

    return quad_semi_infinite(integrand, accuracy) * math.exp(-shift)


def matern_product_matrix(a, gamma, alphas, nus, m):
    if not isinstance(a, MatrixKernel) or not isinstance(gamma, KernelSpec):
        raise ParameterError("matern_product_matrix needs a matrix kernel A and a kernel gamma")
    return MaternProductMatrix(a, gamma, tuple(alphas), tuple(nus), m)


def matern_hilbert_matrix(a, gamma, nus):
    if not isinstance(a, MatrixKernel) or not isinstance(gamma, KernelSpec):
        raise ParameterError("matern_hilbert_matrix needs a matrix kernel A and a kernel gamma")
    return MaternHilbertMatrix(a, gamma, tuple(nus))


def gamma_power_matrix(gamma, nus):
    if not isinstance(gamma, KernelSpec):
        raise ParameterError("gamma_power_matrix needs a kernel gamma")
    return GammaPowerMatrix(gamma, tuple(nus))


def _single_site_block(kernel, point, i, j):
    block = np.array([
        [kernel.entry(i, i, point, point), kernel.entry(i, j, point, point)],
        [kernel.entry(j, i, point, point), kernel.entry(j, j, point, point)],
    ])
    return block, classify_psd(block)


def _classify_channels(name, kernel, sites, keys, tol):
    """Shared SPD rule of the matrix Matern kernels.

    SPD iff gamma is metrizable on the sites, A_ii(u, u) > 0 and the channel
    keys are pairwise distinct. The witness of a repeated key is the channel
    pair with its 2 x 2 interpolation matrix at a single point.
    """
    sites = _sites(sites)
    metric = _metrizable_on(kernel.gamma, sites, tol)
    c_probe = probe_c_condition(kernel, sites)
    positive = all(kernel.a.entry(i, i, u, u) > 0 for u in sites for i in range(kernel.size))
    duplicate = None
    for i in range(kernel.size):
        for j in range(i + 1, kernel.size):
            if keys[i] == keys[j] and duplicate is None:
                duplicate = (i, j)
    details = {
        'metrizable': metric.verdict, 'diagonal_positive': positive,
        'distinct_parameters': duplicate is None, 'c_condition': c_probe.verdict,
    }
    witness = None
    if duplicate is not None:
        site = sites[0]
        point = _probe_point(kernel, site)
        block, verdict = _single_site_block(kernel, point, *duplicate)
        witness = {'channels': duplicate, 'matrix': block, 'verdict': verdict}
    elif not metric.verdict:
        witness = {'sites': metric.witness}
    verdict = metric.verdict and positive and duplicate is None
    return ClassReport(name, verdict, witness=witness, tolerances=dict(metric.tolerances),
                       details=details)


def _probe_point(kernel, site):
    if isinstance(kernel, MaternProductMatrix):
        return Product(site, (0.0,) * kernel.m)
    if isinstance(kernel, MaternHilbertMatrix):
        return Product(site, (0.0,))
    return site


def classify_matern_product(kernel, sites, tol=None):
    keys = [(a, n) for a, n in zip(kernel.alphas, kernel.nus)]
    return _classify_channels('matern_matrix_spd', kernel, sites, keys, tol)


def classify_matern_hilbert(kernel, sites, tol=None):
    return _classify_channels('matern_hilbert_spd', kernel, sites, list(kernel.nus), tol)


def classify_gamma_power(kernel, sites, tol=None):
    """SPD / universality / ISPD of the gamma power matrix kernel on a sample.

    SPD fails when two channels share nu or two distinct sites have
    gamma(u, v) = gamma(u, u) = gamma(v, v). With gamma metrizable,
    universality reduces to distinct nus and ISPD also needs
    inf gamma(u, u) > 0, reported from the sample.
    """
    sites = _sites(sites)
    g = gram(kernel.gamma, sites).entries
    if np.any(g <= 0):
        raise DomainError("gamma must be positive on the sample")
    scale = float(np.max(np.abs(g)))
    tol = settings.CLASS_RTOL * scale if tol is None else tol
    duplicate = None
    for i in range(kernel.size):
        for j in range(i + 1, kernel.size):
            if kernel.nus[i] == kernel.nus[j] and duplicate is None:
                duplicate = (i, j)
    flat_sites = None
    for p in range(len(sites)):
        for q in range(p + 1, len(sites)):
            if (abs(g[p, q] - g[p, p]) <= tol and abs(g[p, q] - g[q, q]) <= tol
                    and flat_sites is None):
                flat_sites = (p, q)
    metric = _metrizable_on(kernel.gamma, sites, tol)
    distinct = duplicate is None
    diagonal_min = float(np.min(np.diag(g)))
    witness = None
    if duplicate is not None:
        block, verdict = _single_site_block(kernel, sites[0], *duplicate)
        witness = {'channels': duplicate, 'matrix': block, 'verdict': verdict}
    elif flat_sites is not None:
        witness = {'sites': flat_sites}
    spd = distinct and flat_sites is None
    return ClassReport(
        'gamma_power_spd', spd, witness=witness, tolerances={'tol': tol},
        details={
            'distinct_nus': distinct, 'metrizable': metric.verdict,
            'universal': metric.verdict and distinct,
            'ispd': metric.verdict and distinct and diagonal_min > 0,
            'diagonal_min': diagonal_min,
        })


def _classes(gamma, tol):
    n = gamma.shape[0]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def related(i, j):
        return abs(2.0 * gamma[i, j] - gamma[i, i] - gamma[j, j]) <= tol

    for i in range(n):
        for j in range(i + 1, n):
            if related(i, j):
                parent[find(j)] = find(i)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    classes = sorted(tuple(members) for members in groups.values())
    for members in classes:
        for a in members:
            for b in members:
                if a < b and not related(a, b):
                    raise IllConditionedError(
                        f"channel relation is not transitive: {a} and {b} are joined "
                        f"through class {members} but 2 gamma_ab != gamma_aa + gamma_bb")
    return tuple(classes)


def classify_matrix_gaussian(inst, tol=None):
    """Strict positivity and C0-universality of [a_ij exp(-|x - y|^2 / gamma_ij)].

    SPD iff a is positive definite. C0-universal iff C_F is positive definite
    for every class F of channels with 2 gamma_ij = gamma_ii + gamma_jj.
    """
    c = inst.c_matrix
    c_verdict = classify_psd(c)
    failed = []
    if not c_verdict.is_psd:
        failed.append('C positive semidefinite')
    if inst.size >= 2 and not check_cnd(inst.gamma).is_cnd:
        failed.append('Gamma conditionally negative definite')
    if failed:
        raise PreconditionError(
            f"hypotheses fail: {', '.join(failed)}", failed=failed)

    gamma = inst.gamma.entries
    if tol is None:
        tol = settings.CLASS_RTOL * float(np.max(np.abs(gamma)))
    a_verdict = classify_psd(inst.a)
    classes = _classes(gamma, tol)
    failing = None
    class_verdicts = []
    for members in classes:
        verdict = classify_psd(c[np.ix_(members, members)])
        class_verdicts.append(verdict)
        if not verdict.is_pd and failing is None:
            failing = members
    return MatrixGaussianReport(
        spd=a_verdict.is_pd, c0_universal=failing is None, classes=classes,
        failing_class=failing, a_verdict=a_verdict,
        class_verdicts=tuple(class_verdicts), tol_used=tol)


def direct_sum_rank_probe(sigmas=(1.0, 2.0, 4.0), centers=None, grid=None, rtol=None):
    """Numerical rank of the evaluation matrix of exp(-sigma |c - x|^2).

    Rows run over (sigma, center), columns over grid points of R^2. Full
    rank means the Gaussian feature spaces for distinct sigmas and centers
    do not overlap on the grid.
    """
    if centers is None:
        centers = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
    if grid is None:
        xs, ys = np.meshgrid(np.linspace(-2.0, 2.0, 6), np.linspace(-2.5, 2.5, 10))
        grid = np.column_stack([xs.ravel(), ys.ravel()])
    rtol = settings.RANK_RTOL if rtol is None else rtol
    centers = np.asarray(centers, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if centers.ndim != 2 or grid.ndim != 2 or centers.shape[1] != grid.shape[1]:
        raise InputError("centers and grid must be point arrays of the same dimension")
    rows = []
    for sigma in sigmas:
        d2 = np.sum((centers[:, None, :] - grid[None, :, :]) ** 2, axis=-1)
        rows.append(np.exp(-float(sigma) * d2))
    matrix = np.vstack(rows)
    sv = singular_values(matrix)
    expected = matrix.shape[0]
    rank = int(np.sum(sv > rtol * sv[0]))
    return ClassReport(
        'direct_sum_rank', rank == expected, witness=None if rank == expected else rank,
        tolerances={'rtol': rtol},
        details={'rank': rank, 'expected': expected, 'shape': list(matrix.shape),
                 'sigma_min': float(sv[-1]), 'sigma_max': float(sv[0])})


__all__ = [
    'gaussian', 'radial_cm_mixture', 'gneiting', 'probe_c_condition',
    'classify_gneiting_general', 'matern', 'matern_oracle', 'matern_product_matrix',
    'matern_hilbert_matrix', 'gamma_power_matrix', 'classify_matern_product',
    'classify_matern_hilbert', 'classify_gamma_power', 'classify_matrix_gaussian',
    'direct_sum_rank_probe',
]
