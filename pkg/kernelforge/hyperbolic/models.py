import math
from dataclasses import dataclass
from typing import Tuple

from kernelforge import settings
from kernelforge.core.models import Hyperboloid, KernelSpec, _positive, dot
from kernelforge.exceptions import DomainError, InvariantError, KernelTypeError
from kernelforge.families.models import validate_atoms

HyperboloidPoint = Hyperboloid


def minkowski_value(z, w):
    """[z, w] = t_z t_w - <x_z, x_w>, clamped to 1 within tolerance."""
    if z.dim != w.dim:
        raise KernelTypeError(f"hyperboloid dimension mismatch: {z.dim} != {w.dim}")
    if z == w:
        return 1.0
    value = z.t * w.t - dot(z.x, w.x)
    if value < 1.0:
        if value < 1.0 - settings.MINKOWSKI_TOL * max(1.0, z.t * w.t):
            raise InvariantError(f"Minkowski form {value!r} is below 1")
        value = 1.0
    return value


@dataclass(frozen=True)
class MinkowskiForm(KernelSpec):
    family = 'minkowski'

    def accepts(self, point):
        return isinstance(point, Hyperboloid)

    def evaluate(self, x, y):
        return minkowski_value(x, y)

    def to_dict(self):
        return {'family': self.family}


@dataclass(frozen=True)
class SechPower(KernelSpec):
    """[z, w]^(-r) = sech(d(z, w))^r, ISPD on the hyperboloid for r > 0."""

    r: float
    family = 'sech_power'

    def __post_init__(self):
        object.__setattr__(self, 'r', _positive('r', self.r))

    def accepts(self, point):
        return isinstance(point, Hyperboloid)

    def evaluate(self, x, y):
        return minkowski_value(x, y) ** (-self.r)

    def to_dict(self):
        return {'family': self.family, 'r': self.r}


@dataclass(frozen=True)
class IsotropicAtoms:
    """Discrete measure on [0, inf) given as (weight, exponent) pairs."""

    atoms: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, 'atoms', validate_atoms(self.atoms, 'exponent'))

    @property
    def strict(self):
        return any(w > 0 and r > 0 for w, r in self.atoms)

    @property
    def decays_to_zero(self):
        return not any(w > 0 and r == 0 for w, r in self.atoms)


@dataclass(frozen=True)
class Isotropic(KernelSpec):
    """sum_i w_i [z, w]^(-r_i); exponent 0 atoms add a constant."""

    atoms: IsotropicAtoms
    family = 'isotropic'

    def __post_init__(self):
        if not isinstance(self.atoms, IsotropicAtoms):
            object.__setattr__(self, 'atoms', IsotropicAtoms(tuple(self.atoms)))

    @property
    def strict(self):
        return self.atoms.strict

    @property
    def decays_to_zero(self):
        return self.atoms.decays_to_zero

    def accepts(self, point):
        return isinstance(point, Hyperboloid)

    def evaluate(self, x, y):
        s = minkowski_value(x, y)
        return math.fsum(w * s ** (-r) for w, r in self.atoms.atoms)

    def to_dict(self):
        return {'family': self.family, 'atoms': [list(a) for a in self.atoms.atoms]}


def check_log_entry(value, tol=None):
    """An L value; below 1 - tol is a domain error, [1 - tol, 1) clamps to 1."""
    tol = settings.MINKOWSKI_TOL * max(1.0, abs(value)) if tol is None else tol
    if value < 1.0:
        if value < 1.0 - tol:
            raise DomainError(f"log-conditional kernel value {value!r} is below 1")
        return 1.0
    return value


@dataclass(frozen=True)
class InverseLogConditional(KernelSpec):
    """1 / L(x, y) = exp(-log L(x, y)) for a kernel L >= 1."""

    inner: KernelSpec
    family = 'inverse_log_conditional'

    def accepts(self, point):
        return self.inner.accepts(point)

    def evaluate(self, x, y):
        return 1.0 / check_log_entry(self.inner.evaluate(x, y))

    def children(self):
        return (self.inner,)

    def to_dict(self):
        return {'family': self.family, 'kernel': self.inner.to_dict()}
