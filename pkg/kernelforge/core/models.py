"""Points, the kernel spec tree and Gram matrices."""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple, Union

import numpy as np

from kernelforge import settings
from kernelforge.exceptions import (
    InputError, InvariantError, KernelTypeError, NumericalError, ParameterError,
)
from kernelforge.numerics import PsdVerdict, SymMatrix, classify_psd, sym_eigen

logger = logging.getLogger(__name__)


def _as_coords(values, name):
    coords = tuple(float(v) for v in np.ravel(np.asarray(values, dtype=float)))
    if not all(math.isfinite(c) for c in coords):
        raise InputError(f"{name} has non-finite coordinates")
    return coords


@dataclass(frozen=True)
class Euclidean:
    coords: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coords', _as_coords(self.coords, 'Euclidean point'))

    @property
    def vector(self):
        return np.asarray(self.coords)

    @property
    def dim(self):
        return len(self.coords)

    def key(self):
        return (0, self.coords)


@dataclass(frozen=True)
class Product:
    """A point (u, x) of X x R^m: a site and a spatial vector."""

    site: 'Point'
    spatial: Tuple[float, ...]

    def __post_init__(self):
        if not isinstance(self.site, POINT_TYPES):
            raise InputError(f"site must be a point, got {type(self.site).__name__}")
        object.__setattr__(self, 'spatial', _as_coords(self.spatial, 'spatial part'))

    @property
    def vector(self):
        return np.asarray(self.spatial)

    def key(self):
        return (1, self.site.key(), self.spatial)


@dataclass(frozen=True)
class Hyperboloid:
    """A point (x, t) with t^2 - |x|^2 = 1, t > 0.

    Drift up to HYPERBOLOID_RENORMALIZE is repaired by recomputing t from x.
    """

    x: Tuple[float, ...]
    t: float

    def __post_init__(self):
        x = _as_coords(self.x, 'hyperboloid point')
        t = float(self.t)
        if not (math.isfinite(t) and t > 0):
            raise InvariantError(f"hyperboloid point needs t > 0, got {t}")
        exact = math.sqrt(1.0 + math.fsum(c * c for c in x))
        drift = abs(t * t - exact * exact)
        if drift > settings.HYPERBOLOID_TOL * max(1.0, t * t):
            if drift > settings.HYPERBOLOID_RENORMALIZE * max(1.0, t * t):
                raise InvariantError(
                    f"t^2 - |x|^2 deviates from 1 by {drift:.3e}")
            logger.warning("renormalizing hyperboloid point (drift %.3e)", drift)
            t = exact
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 't', t)

    @property
    def dim(self):
        return len(self.x)

    @property
    def ambient(self):
        return np.asarray(self.x + (self.t,))

    def key(self):
        return (2, self.x, self.t)


@dataclass(frozen=True)
class Channel:
    """A point (x, i) used to flatten an l x l matrix valued kernel."""

    base: 'Point'
    channel: int

    def __post_init__(self):
        if not isinstance(self.base, POINT_TYPES):
            raise InputError(f"base must be a point, got {type(self.base).__name__}")
        if int(self.channel) != self.channel or self.channel < 0:
            raise InputError(f"channel must be a non-negative integer, got {self.channel}")
        object.__setattr__(self, 'channel', int(self.channel))

    def key(self):
        return (3, self.base.key(), self.channel)


POINT_TYPES = (Euclidean, Product, Hyperboloid, Channel)
Point = Union[Euclidean, Product, Hyperboloid, Channel]


def as_point(value):
    """Points pass through; anything else is read as Euclidean coordinates."""
    if isinstance(value, POINT_TYPES):
        return value
    return Euclidean(np.atleast_1d(np.asarray(value, dtype=float)))


def sq_distance(x, y):
    a = x.coords if isinstance(x, Euclidean) else x
    b = y.coords if isinstance(y, Euclidean) else y
    if len(a) != len(b):
        raise KernelTypeError(f"dimension mismatch: {len(a)} != {len(b)}")
    return math.fsum((p - q) * (p - q) for p, q in zip(a, b))


def dot(a, b):
    if len(a) != len(b):
        raise KernelTypeError(f"dimension mismatch: {len(a)} != {len(b)}")
    return math.fsum(p * q for p, q in zip(a, b))


class KernelSpec:
    """Node of a kernel spec tree.

    Subclasses implement ``evaluate`` (without domain checks), ``accepts``
    and ``to_dict``. Public evaluation goes through
    :func:`kernelforge.core.evaluate`, which checks domains and fixes a
    canonical argument order.
    """

    family = None
    op = None

    def accepts(self, point):
        raise NotImplementedError

    def evaluate(self, x, y):
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError

    def sample_checks(self, points):
        """Reports on hypotheses that can only be checked on a sample."""
        return ()

    def children(self):
        return ()

    def __call__(self, x, y):
        from .main import evaluate
        return evaluate(self, x, y)


def _positive(name, value):
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class One(KernelSpec):
    family = 'one'

    def accepts(self, point):
        return isinstance(point, POINT_TYPES)

    def evaluate(self, x, y):
        return 1.0

    def to_dict(self):
        return {'family': self.family}


@dataclass(frozen=True)
class Constant(KernelSpec):
    value: float
    family = 'constant'

    def __post_init__(self):
        object.__setattr__(self, 'value', float(self.value))

    def accepts(self, point):
        return isinstance(point, POINT_TYPES)

    def evaluate(self, x, y):
        return self.value

    def to_dict(self):
        return {'family': self.family, 'value': self.value}


@dataclass(frozen=True)
class ExpDot(KernelSpec):
    """exp(c <x, y>) on Euclidean points."""

    scale: float = 1.0
    family = 'exp_dot'

    def __post_init__(self):
        object.__setattr__(self, 'scale', _positive('scale', self.scale))

    def accepts(self, point):
        return isinstance(point, Euclidean)

    def evaluate(self, x, y):
        return math.exp(self.scale * dot(x.coords, y.coords))

    def to_dict(self):
        return {'family': self.family, 'scale': self.scale}


@dataclass(frozen=True, eq=False)
class Table(KernelSpec):
    """User supplied values K(p_i, p_j) looked up by point."""

    points: Tuple['Point', ...]
    values: SymMatrix
    family = 'table'

    def __post_init__(self):
        points = tuple(point_from_dict(p) for p in self.points)
        values = self.values if isinstance(self.values, SymMatrix) else SymMatrix(self.values)
        if values.n != len(points):
            raise ParameterError(
                f"table has {values.n} rows for {len(points)} points")
        index = {}
        for i, p in enumerate(points):
            if p in index:
                raise ParameterError(f"table point {i} repeats point {index[p]}")
            index[p] = i
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, '_index', index)

    def accepts(self, point):
        return point in self._index

    def evaluate(self, x, y):
        return float(self.values.entries[self._index[x], self._index[y]])

    def to_dict(self):
        return {
            'family': self.family,
            'points': [point_to_dict(p) for p in self.points],
            'values': self.values.tolist(),
        }


@dataclass(frozen=True)
class Schur(KernelSpec):
    left: KernelSpec
    right: KernelSpec
    op = 'schur'

    def accepts(self, point):
        return self.left.accepts(point) and self.right.accepts(point)

    def evaluate(self, x, y):
        return self.left.evaluate(x, y) * self.right.evaluate(x, y)

    def children(self):
        return (self.left, self.right)

    def to_dict(self):
        return {'op': self.op, 'left': self.left.to_dict(), 'right': self.right.to_dict()}


@dataclass(frozen=True)
class Tensor(KernelSpec):
    """p(u, v) q(x, y) on Product points (u, x), (v, y)."""

    left: KernelSpec
    right: KernelSpec
    op = 'tensor'

    def accepts(self, point):
        return (isinstance(point, Product)
                and self.left.accepts(point.site)
                and self.right.accepts(Euclidean(point.spatial)))

    def evaluate(self, x, y):
        return (self.left.evaluate(x.site, y.site)
                * self.right.evaluate(Euclidean(x.spatial), Euclidean(y.spatial)))

    def children(self):
        return (self.left, self.right)

    def to_dict(self):
        return {'op': self.op, 'left': self.left.to_dict(), 'right': self.right.to_dict()}


@dataclass(frozen=True)
class Rescale(KernelSpec):
    inner: KernelSpec
    weight: object
    op = 'rescale'

    def accepts(self, point):
        return self.inner.accepts(point) and self.weight.accepts(point)

    def evaluate(self, x, y):
        try:
            wx = self.weight(x)
            wy = self.weight(y)
        except OverflowError:
            raise NumericalError("weight function overflowed")
        if not (math.isfinite(wx) and math.isfinite(wy)):
            raise NumericalError("weight function returned a non-finite value")
        # w(x) w(y) first: the product is order independent
        return (wx * wy) * self.inner.evaluate(x, y)

    def children(self):
        return (self.inner,)

    def to_dict(self):
        return {'op': self.op, 'inner': self.inner.to_dict(), 'weight': self.weight.to_dict()}


@dataclass(frozen=True)
class Pullback(KernelSpec):
    inner: KernelSpec
    map: object
    op = 'pullback'

    def accepts(self, point):
        return self.map.accepts(point)

    def evaluate(self, x, y):
        hx = self.map(x)
        hy = self.map(y)
        for image in (hx, hy):
            if not self.inner.accepts(image):
                raise KernelTypeError(
                    f"map image {type(image).__name__} is outside the inner kernel domain")
        return self.inner.evaluate(hx, hy)

    def children(self):
        return (self.inner,)

    def to_dict(self):
        return {'op': self.op, 'inner': self.inner.to_dict(), 'map': self.map.to_dict()}


@dataclass(frozen=True)
class Mixture(KernelSpec):
    """sum_i w_i K_i with w_i >= 0, not all zero."""

    atoms: Tuple[Tuple[float, KernelSpec], ...]
    op = 'mixture'

    def __post_init__(self):
        atoms = tuple((float(w), k) for w, k in self.atoms)
        if not atoms:
            raise ParameterError("mixture needs at least one atom")
        if any(not math.isfinite(w) or w < 0 for w, _ in atoms):
            raise ParameterError("mixture weights must be finite and nonnegative")
        if all(w == 0 for w, _ in atoms):
            raise ParameterError("mixture weights are all zero")
        object.__setattr__(self, 'atoms', atoms)

    def accepts(self, point):
        return all(k.accepts(point) for _, k in self.atoms)

    def evaluate(self, x, y):
        total = 0.0
        for w, k in self.atoms:
            total += w * k.evaluate(x, y)
        return total

    def children(self):
        return tuple(k for _, k in self.atoms)

    def to_dict(self):
        return {
            'op': self.op,
            'atoms': [{'weight': w, 'kernel': k.to_dict()} for w, k in self.atoms],
        }


@dataclass(frozen=True)
class Flatten(KernelSpec):
    """L((x, i), (y, j)) = K_ij(x, y) for an l x l matrix valued kernel."""

    matrix: object
    op = 'flatten'

    def accepts(self, point):
        return isinstance(point, Channel) and self.matrix.accepts(point.base)

    def evaluate(self, x, y):
        size = self.matrix.size
        for p in (x, y):
            if p.channel >= size:
                raise InputError(f"channel {p.channel} out of range for l = {size}")
        return self.matrix.entry(x.channel, y.channel, x.base, y.base)

    def to_dict(self):
        return {'op': self.op, 'matrix': self.matrix.to_dict()}


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Interpolation matrix [K(x_i, x_j)] with a lazily computed spectrum."""

    points: Tuple['Point', ...]
    matrix: SymMatrix
    verdict: Optional[PsdVerdict] = field(default=None)
    checks: Tuple[object, ...] = ()

    @property
    def n(self):
        return self.matrix.n

    @property
    def entries(self):
        return self.matrix.entries

    @cached_property
    def spectrum(self):
        return sym_eigen(self.matrix, vectors=True)

    def classify(self, tol_scale=None):
        if self.verdict is not None and tol_scale is None:
            return self.verdict
        return classify_psd(self.matrix, tol_scale, spectrum=self.spectrum)


def point_to_dict(point):
    if isinstance(point, Euclidean):
        return {'coords': list(point.coords)}
    if isinstance(point, Product):
        return {'site': point_to_dict(point.site), 'spatial': list(point.spatial)}
    if isinstance(point, Hyperboloid):
        return {'x': list(point.x), 't': point.t}
    if isinstance(point, Channel):
        return {'base': point_to_dict(point.base), 'channel': point.channel}
    raise InputError(f"not a point: {point!r}")


def point_from_dict(data):
    if not isinstance(data, dict):
        return as_point(data)
    if 'coords' in data:
        return Euclidean(data['coords'])
    if 'site' in data:
        return Product(point_from_dict(data['site']), data['spatial'])
    if 't' in data:
        return Hyperboloid(data['x'], data['t'])
    if 'channel' in data:
        return Channel(point_from_dict(data['base']), data['channel'])
    raise InputError(f"cannot read a point from keys {sorted(data)}")
