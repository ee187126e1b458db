import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from kernelforge.core.models import (
    Euclidean, KernelSpec, Product, _positive, sq_distance,
)
from kernelforge.exceptions import DomainError, ParameterError
from kernelforge.numerics import SymMatrix
from kernelforge.reports import ClassReport, jsonable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Gaussian(KernelSpec):
    """exp(-sigma |x - y|^2) on Euclidean points of any dimension.

    Strictly positive definite and universal for every sigma > 0, also on
    infinite dimensional Hilbert spaces. C0-universality there depends on
    every bounded closed set being compact, which is documented here and
    never checked.
    """

    sigma: float
    family = 'gaussian'

    def __post_init__(self):
        object.__setattr__(self, 'sigma', _positive('sigma', self.sigma))

    def accepts(self, point):
        return isinstance(point, Euclidean)

    def evaluate(self, x, y):
        return math.exp(-self.sigma * sq_distance(x, y))

    def to_dict(self):
        return {'family': self.family, 'sigma': self.sigma}


def validate_atoms(atoms, rate_name):
    """(weight, rate) pairs, finite and >= 0, with some positive weight."""
    out = []
    for weight, rate in atoms:
        weight = float(weight)
        rate = float(rate)
        if not (math.isfinite(weight) and weight >= 0):
            raise ParameterError(f"atom weight must be finite and >= 0, got {weight}")
        if not (math.isfinite(rate) and rate >= 0):
            raise ParameterError(f"atom {rate_name} must be finite and >= 0, got {rate}")
        out.append((weight, rate))
    if not out or all(w == 0 for w, _ in out):
        raise ParameterError("at least one atom needs a positive weight")
    return tuple(out)


@dataclass(frozen=True)
class RadialCmMixture(KernelSpec):
    """sum_i w_i exp(-r_i |x - y|^2), a discrete radial CM mixture."""

    atoms: Tuple[Tuple[float, float], ...]
    family = 'cm_mixture'

    def __post_init__(self):
        object.__setattr__(self, 'atoms', validate_atoms(self.atoms, 'rate'))

    @property
    def strict(self):
        """Strictly positive definite unless all the mass sits at r = 0."""
        return any(w > 0 and r > 0 for w, r in self.atoms)

    @property
    def decays_to_zero(self):
        return not any(w > 0 and r == 0 for w, r in self.atoms)

    def accepts(self, point):
        return isinstance(point, Euclidean)

    def evaluate(self, x, y):
        d2 = sq_distance(x, y)
        return math.fsum(w * math.exp(-r * d2) for w, r in self.atoms)

    def to_dict(self):
        return {'family': self.family, 'atoms': [list(a) for a in self.atoms]}


@dataclass(frozen=True)
class MaternParams:
    alpha: float
    nu: float

    def __post_init__(self):
        object.__setattr__(self, 'alpha', _positive('alpha', self.alpha))
        object.__setattr__(self, 'nu', _positive('nu', self.nu))


@dataclass(frozen=True)
class MaternKernel(KernelSpec):
    params: MaternParams
    family = 'matern'

    def accepts(self, point):
        return isinstance(point, Euclidean)

    def evaluate(self, x, y):
        from .main import matern
        return matern(math.sqrt(sq_distance(x, y)), self.params)

    def to_dict(self):
        return {'family': self.family, 'alpha': self.params.alpha, 'nu': self.params.nu}


@dataclass(frozen=True)
class GneitingSpec:
    """Parameters of a Gneiting kernel.

    ``classic`` uses a Bernstein function g and a completely monotone psi on
    Euclidean sites; ``general`` uses a site kernel A and a positive CND
    kernel gamma on arbitrary sites.
    """

    variant: str
    m: int
    g: object = None
    psi: object = None
    a: Optional[KernelSpec] = None
    gamma: Optional[KernelSpec] = None

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ParameterError(f"spatial dimension m must be a positive integer, got {self.m}")
        object.__setattr__(self, 'm', int(self.m))
        if self.variant == 'classic':
            if self.g is None or self.psi is None:
                raise ParameterError("classic Gneiting needs g and psi")
        elif self.variant == 'general':
            if not isinstance(self.a, KernelSpec) or not isinstance(self.gamma, KernelSpec):
                raise ParameterError("general Gneiting needs kernel specs A and gamma")
        else:
            raise ParameterError(f"unknown Gneiting variant {self.variant!r}")

    @classmethod
    def classic(cls, g, psi, m):
        return cls('classic', m, g=g, psi=psi)

    @classmethod
    def general(cls, a, gamma, m):
        return cls('general', m, a=a, gamma=gamma)


def _spatial_ok(point, m):
    return isinstance(point, Product) and len(point.spatial) <= m


@dataclass(frozen=True)
class GneitingClassic(KernelSpec):
    """g(|u - v|^2)^(-m/2) psi(|x - y|^2 / g(|u - v|^2)) on R^m' x R^m."""

    g: object
    psi: object
    m: int
    construction: Optional[ClassReport] = field(default=None, compare=False)
    family = 'gneiting_classic'

    def accepts(self, point):
        return _spatial_ok(point, self.m) and isinstance(point.site, Euclidean)

    def evaluate(self, x, y):
        gs = self.g(sq_distance(x.site, y.site))
        if not gs > 0:
            raise DomainError(f"g must be positive, got {gs}")
        d2 = sq_distance(x.spatial, y.spatial)
        return gs ** (-self.m / 2.0) * self.psi(d2 / gs)

    def to_dict(self):
        return {
            'family': self.family, 'g': self.g.to_dict(), 'psi': self.psi.to_dict(),
            'm': self.m,
        }


@dataclass(frozen=True)
class GneitingGeneral(KernelSpec):
    """A(u, v) exp(-|x - y|^2 / gamma(u, v)) on X x R^m.

    Positive definite when C(u, v) = A(u, v) gamma(u, v)^(m/2) is.
    """

    a: KernelSpec
    gamma: KernelSpec
    m: int
    family = 'gneiting_general'

    def accepts(self, point):
        return (_spatial_ok(point, self.m)
                and self.a.accepts(point.site) and self.gamma.accepts(point.site))

    def site_gamma(self, u, v):
        value = self.gamma.evaluate(u, v)
        if not value > 0:
            raise DomainError(f"gamma must be positive, got {value}")
        return value

    def evaluate(self, x, y):
        gamma = self.site_gamma(x.site, y.site)
        d2 = sq_distance(x.spatial, y.spatial)
        return self.a.evaluate(x.site, y.site) * math.exp(-d2 / gamma)

    def c_entry(self, i, j, u, v):
        return self.a.evaluate(u, v) * self.site_gamma(u, v) ** (self.m / 2.0)

    def sample_checks(self, points):
        """The C condition on the distinct sites of the sample."""
        from .main import probe_c_condition
        sites = tuple(dict.fromkeys(p.site for p in points))
        return (probe_c_condition(self, sites),)

    def children(self):
        return (self.a, self.gamma)

    def to_dict(self):
        return {
            'family': self.family, 'a': self.a.to_dict(), 'gamma': self.gamma.to_dict(),
            'm': self.m,
        }


@dataclass(frozen=True, eq=False)
class MatrixGaussianInstance:
    """The l x l data of the kernel [a_ij exp(-|x - y|^2 / gamma_ij)] on R^m."""

    a: SymMatrix
    gamma: SymMatrix
    m: int

    def __post_init__(self):
        a = self.a if isinstance(self.a, SymMatrix) else SymMatrix(self.a)
        gamma = self.gamma if isinstance(self.gamma, SymMatrix) else SymMatrix(self.gamma)
        if a.n != gamma.n or a.n == 0:
            raise ParameterError(f"a is {a.n}x{a.n} but Gamma is {gamma.n}x{gamma.n}")
        if not np.all(gamma.entries > 0):
            raise ParameterError("Gamma entries must be positive")
        if int(self.m) != self.m or self.m < 1:
            raise ParameterError(f"m must be a positive integer, got {self.m}")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'gamma', gamma)
        object.__setattr__(self, 'm', int(self.m))

    @property
    def size(self):
        return self.a.n

    @property
    def c_matrix(self):
        return self.a.entries * self.gamma.entries ** (self.m / 2.0)

    def permuted(self, order):
        order = list(order)
        return MatrixGaussianInstance(
            self.a.entries[np.ix_(order, order)],
            self.gamma.entries[np.ix_(order, order)], self.m)


@dataclass(frozen=True)
class MatrixGaussianReport:
    """Strict positivity and C0-universality of a matrix Gaussian kernel.

    ``classes`` partitions the channels by 2 gamma_ij = gamma_ii + gamma_jj;
    ``failing_class`` is a class whose C_F is not positive definite.
    """

    spd: bool
    c0_universal: bool
    classes: Tuple[Tuple[int, ...], ...]
    failing_class: Optional[Tuple[int, ...]] = None
    a_verdict: object = None
    class_verdicts: Tuple[object, ...] = ()
    tol_used: float = 0.0

    def to_dict(self):
        return {
            'spd': bool(self.spd),
            'c0_universal': bool(self.c0_universal),
            'classes': [list(c) for c in self.classes],
            'failing_class': None if self.failing_class is None else list(self.failing_class),
            'a_verdict': jsonable(self.a_verdict),
            'class_verdicts': [jsonable(v) for v in self.class_verdicts],
            'tol_used': self.tol_used,
        }
