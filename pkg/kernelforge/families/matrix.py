"""
Matrix valued kernels.

Each kernel exposes ``size`` (l), ``accepts(point)``, ``entry(i, j, x, y)``
and ``to_dict()``; :func:`kernelforge.core.flatten` turns it into a scalar
kernel on channel points. Entries satisfy K_ij(x, y) = K_ji(y, x).
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from kernelforge.core.models import POINT_TYPES, Euclidean, KernelSpec, Product, sq_distance
from kernelforge.exceptions import DomainError, ParameterError
from kernelforge.numerics import SymMatrix, gamma_fn
from .models import MaternParams


def _positives(name, values):
    values = tuple(float(v) for v in values)
    if not values:
        raise ParameterError(f"{name} must not be empty")
    if any(not (math.isfinite(v) and v > 0) for v in values):
        raise ParameterError(f"{name} must all be positive")
    return values


def _sym(a):
    return a if isinstance(a, SymMatrix) else SymMatrix(a)


def _positive_gamma(gamma, u, v):
    value = gamma.evaluate(u, v)
    if not value > 0:
        raise DomainError(f"gamma must be positive, got {value}")
    return value


class MatrixKernel:
    family = None

    @property
    def size(self):
        raise NotImplementedError

    def accepts(self, point):
        raise NotImplementedError

    def entry(self, i, j, x, y):
        raise NotImplementedError

    def block(self, x, y):
        """The l x l matrix K(x, y)."""
        n = self.size
        return np.array([[self.entry(i, j, x, y) for j in range(n)] for i in range(n)])

    def to_dict(self):
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class ConstantMatrix(MatrixKernel):
    a: SymMatrix
    family = 'constant_matrix'

    def __post_init__(self):
        object.__setattr__(self, 'a', _sym(self.a))

    @property
    def size(self):
        return self.a.n

    def accepts(self, point):
        return isinstance(point, POINT_TYPES)

    def entry(self, i, j, x, y):
        return float(self.a.entries[i, j])

    def to_dict(self):
        return {'family': self.family, 'a': self.a.tolist()}


@dataclass(frozen=True, eq=False)
class SeparableMatrix(MatrixKernel):
    """a_ij k(x, y)."""

    a: SymMatrix
    kernel: KernelSpec
    family = 'separable_matrix'

    def __post_init__(self):
        object.__setattr__(self, 'a', _sym(self.a))

    @property
    def size(self):
        return self.a.n

    def accepts(self, point):
        return self.kernel.accepts(point)

    def entry(self, i, j, x, y):
        return float(self.a.entries[i, j]) * self.kernel.evaluate(x, y)

    def to_dict(self):
        return {'family': self.family, 'a': self.a.tolist(), 'kernel': self.kernel.to_dict()}


@dataclass(frozen=True, eq=False)
class MatrixGaussian(MatrixKernel):
    """[a_ij exp(-|x - y|^2 / gamma_ij)] on R^m."""

    a: SymMatrix
    gamma: SymMatrix
    family = 'matrix_gaussian'

    def __post_init__(self):
        a = _sym(self.a)
        gamma = _sym(self.gamma)
        if a.n != gamma.n:
            raise ParameterError("a and Gamma must have the same size")
        if not np.all(gamma.entries > 0):
            raise ParameterError("Gamma entries must be positive")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'gamma', gamma)

    @property
    def size(self):
        return self.a.n

    def accepts(self, point):
        return isinstance(point, Euclidean)

    def entry(self, i, j, x, y):
        return float(self.a.entries[i, j]) * math.exp(-sq_distance(x, y) / self.gamma.entries[i, j])

    def to_dict(self):
        return {'family': self.family, 'a': self.a.tolist(), 'gamma': self.gamma.tolist()}


def _product_accepts(point, a, gamma):
    return (isinstance(point, Product)
            and a.accepts(point.site) and gamma.accepts(point.site))


@dataclass(frozen=True, eq=False)
class MaternProductMatrix(MatrixKernel):
    """A_ij(u, v) M(|x - y| / gamma(u, v)^(1/2); alpha_ij, nu_ij) on X x R^m.

    alpha_ij = ((alpha_i^2 + alpha_j^2) / 2)^(1/2) and nu_ij = nu_i + nu_j.
    """

    a: MatrixKernel
    gamma: KernelSpec
    alphas: Tuple[float, ...]
    nus: Tuple[float, ...]
    m: int
    family = 'matern_matrix'

    def __post_init__(self):
        alphas = _positives('alphas', self.alphas)
        nus = _positives('nus', self.nus)
        if not (len(alphas) == len(nus) == self.a.size):
            raise ParameterError(
                f"need {self.a.size} alphas and nus, got {len(alphas)} and {len(nus)}")
        object.__setattr__(self, 'alphas', alphas)
        object.__setattr__(self, 'nus', nus)
        object.__setattr__(self, 'm', int(self.m))

    @property
    def size(self):
        return len(self.nus)

    def pair_params(self, i, j):
        alpha = math.sqrt((self.alphas[i] ** 2 + self.alphas[j] ** 2) / 2.0)
        return MaternParams(alpha, self.nus[i] + self.nus[j])

    def normalizer(self, i):
        nu = self.nus[i]
        return 2.0 ** (-nu) * math.sqrt(gamma_fn(2.0 * nu)) / self.alphas[i] ** nu

    def c_factor(self, i, j):
        """Channel factor of the C kernel; C_ij = A_ij gamma^(m/2) c_factor."""
        nu = self.nus[i] + self.nus[j]
        return (self.normalizer(i) * self.normalizer(j)
                * (self.alphas[i] + self.alphas[j]) ** nu / gamma_fn(nu))

    def c_entry(self, i, j, u, v):
        return (self.a.entry(i, j, u, v) * _positive_gamma(self.gamma, u, v) ** (self.m / 2.0)
                * self.c_factor(i, j))

    def accepts(self, point):
        return (_product_accepts(point, self.a, self.gamma)
                and len(point.spatial) <= self.m)

    def entry(self, i, j, x, y):
        from .main import matern
        gamma = _positive_gamma(self.gamma, x.site, y.site)
        r = math.sqrt(sq_distance(x.spatial, y.spatial) / gamma)
        return self.a.entry(i, j, x.site, y.site) * matern(r, self.pair_params(i, j))

    def to_dict(self):
        return {
            'family': self.family, 'a': self.a.to_dict(), 'gamma': self.gamma.to_dict(),
            'alphas': list(self.alphas), 'nus': list(self.nus), 'm': self.m,
        }


@dataclass(frozen=True, eq=False)
class MaternHilbertMatrix(MatrixKernel):
    """A_ij(u, v) M(|x - y|; gamma(u, v)^(1/2), nu_i + nu_j) on X x H.

    Positive definite in every dimension when
    C_ij = A_ij gamma^(nu_i + nu_j) / Gamma(nu_i + nu_j) is.
    """

    a: MatrixKernel
    gamma: KernelSpec
    nus: Tuple[float, ...]
    family = 'matern_hilbert_matrix'

    def __post_init__(self):
        nus = _positives('nus', self.nus)
        if len(nus) != self.a.size:
            raise ParameterError(f"need {self.a.size} nus, got {len(nus)}")
        object.__setattr__(self, 'nus', nus)

    @property
    def size(self):
        return len(self.nus)

    def c_entry(self, i, j, u, v):
        nu = self.nus[i] + self.nus[j]
        return self.a.entry(i, j, u, v) * _positive_gamma(self.gamma, u, v) ** nu / gamma_fn(nu)

    def accepts(self, point):
        return _product_accepts(point, self.a, self.gamma)

    def entry(self, i, j, x, y):
        from .main import matern
        gamma = _positive_gamma(self.gamma, x.site, y.site)
        params = MaternParams(math.sqrt(gamma), self.nus[i] + self.nus[j])
        r = math.sqrt(sq_distance(x.spatial, y.spatial))
        return self.a.entry(i, j, x.site, y.site) * matern(r, params)

    def to_dict(self):
        return {
            'family': self.family, 'a': self.a.to_dict(), 'gamma': self.gamma.to_dict(),
            'nus': list(self.nus),
        }


@dataclass(frozen=True, eq=False)
class GammaPowerMatrix(MatrixKernel):
    """[Gamma(nu_i + nu_j) / gamma(u, v)^(nu_i + nu_j)] on the sites of gamma."""

    gamma: KernelSpec
    nus: Tuple[float, ...]
    family = 'gamma_power_matrix'

    def __post_init__(self):
        object.__setattr__(self, 'nus', _positives('nus', self.nus))

    @property
    def size(self):
        return len(self.nus)

    def accepts(self, point):
        return self.gamma.accepts(point)

    def entry(self, i, j, x, y):
        nu = self.nus[i] + self.nus[j]
        return gamma_fn(nu) / _positive_gamma(self.gamma, x, y) ** nu

    def to_dict(self):
        return {'family': self.family, 'gamma': self.gamma.to_dict(), 'nus': list(self.nus)}


MATRIX_KERNELS = {cls.family: cls for cls in (
    ConstantMatrix, SeparableMatrix, MatrixGaussian, MaternProductMatrix,
    MaternHilbertMatrix, GammaPowerMatrix,
)}
