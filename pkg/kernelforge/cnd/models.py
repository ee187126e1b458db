import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from kernelforge.core.models import Euclidean, KernelSpec, _positive, sq_distance
from kernelforge.exceptions import DomainError, ParameterError, RangeError
from kernelforge.reports import jsonable


@dataclass(frozen=True, eq=False)
class CndReport:
    """Spectrum of P gamma P with P = I - ones / n.

    ``witness_weights`` sums to zero and gives a positive quadratic form when
    the kernel is not conditionally negative definite.
    """

    is_cnd: bool
    lambda_max_projected: float
    tol_used: float
    witness_weights: Optional[np.ndarray] = None

    def __bool__(self):
        return bool(self.is_cnd)

    def to_dict(self):
        return {
            'is_cnd': bool(self.is_cnd),
            'lambda_max_projected': self.lambda_max_projected,
            'tol_used': self.tol_used,
            'witness_weights': jsonable(self.witness_weights),
        }


@dataclass(frozen=True, eq=False)
class Embedding:
    """gamma_ij = |h_i - h_j|^2 + f_i + f_j with rows h_i of ``coords``."""

    coords: np.ndarray
    f: np.ndarray
    base_index: int
    rank: int
    reconstruction_error: float = 0.0

    def reconstruct(self):
        diff = self.coords[:, None, :] - self.coords[None, :, :]
        return np.sum(diff * diff, axis=-1) + self.f[:, None] + self.f[None, :]

    def to_dict(self):
        return {
            'coords': jsonable(self.coords),
            'f': jsonable(self.f),
            'base_index': self.base_index,
            'rank': self.rank,
            'reconstruction_error': self.reconstruction_error,
        }


@dataclass(frozen=True)
class MonotonicityReport:
    """Sign pattern of divided differences on a grid.

    ``violations`` holds (order, grid point, signed value) triples.
    """

    property: str
    order_checked: int
    grid: Tuple[float, ...]
    violations: Tuple[Tuple[int, float, float], ...] = field(default_factory=tuple)
    tol_used: float = 0.0

    @property
    def passed(self):
        return not self.violations

    def __bool__(self):
        return self.passed

    def to_dict(self):
        return {
            'property': self.property,
            'order_checked': self.order_checked,
            'grid': list(self.grid),
            'violations': [list(v) for v in self.violations],
            'tol_used': self.tol_used,
            'passed': self.passed,
        }


@dataclass(frozen=True)
class SquaredDistance(KernelSpec):
    """|x - y|^2, the basic conditionally negative definite kernel."""

    family = 'sq_distance'

    def accepts(self, point):
        return isinstance(point, Euclidean)

    def evaluate(self, x, y):
        return sq_distance(x, y)

    def to_dict(self):
        return {'family': self.family}


@dataclass(frozen=True)
class PowerDistance(KernelSpec):
    """|x - y|^beta, conditionally negative definite for 0 < beta <= 2."""

    beta: float = 1.0
    family = 'power_distance'

    def __post_init__(self):
        beta = _positive('beta', self.beta)
        if beta > 2.0:
            raise ParameterError(f"beta must be <= 2, got {beta}")
        object.__setattr__(self, 'beta', beta)

    def accepts(self, point):
        return isinstance(point, Euclidean)

    def evaluate(self, x, y):
        return sq_distance(x, y) ** (self.beta / 2.0)

    def to_dict(self):
        return {'family': self.family, 'beta': self.beta}


@dataclass(frozen=True)
class SchoenbergTransform(KernelSpec):
    """exp(-t gamma(x, y))."""

    gamma: KernelSpec
    t: float
    family = 'schoenberg'

    def __post_init__(self):
        object.__setattr__(self, 't', _positive('t', self.t))

    def accepts(self, point):
        return self.gamma.accepts(point)

    def evaluate(self, x, y):
        try:
            return math.exp(-self.t * self.gamma.evaluate(x, y))
        except OverflowError:
            raise RangeError(f"exp(-t gamma) overflows at t = {self.t}")

    def children(self):
        return (self.gamma,)

    def to_dict(self):
        return {'family': self.family, 'gamma': self.gamma.to_dict(), 't': self.t}


@dataclass(frozen=True)
class CmComposition(KernelSpec):
    """f(gamma(x, y)) for a completely monotone f and gamma >= 0."""

    gamma: KernelSpec
    function: object
    family = 'cm_compose'

    def accepts(self, point):
        return self.gamma.accepts(point)

    def evaluate(self, x, y):
        value = self.gamma.evaluate(x, y)
        if value < 0:
            raise DomainError(f"cm_compose needs gamma >= 0, got {value}")
        return self.function(value)

    def children(self):
        return (self.gamma,)

    def to_dict(self):
        return {
            'family': self.family,
            'gamma': self.gamma.to_dict(),
            'function': self.function.to_dict(),
        }
