"""
Serializable weight, map and function descriptors.

Rescaling weights, pullback maps and the scalar functions used by the
completely monotone / Bernstein probes come from this closed catalog instead
of arbitrary callables, so every kernel spec round-trips through JSON.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from kernelforge.exceptions import InputError, KernelTypeError, ParameterError
from .models import (
    POINT_TYPES, Euclidean, Hyperboloid, _as_coords, dot, point_from_dict,
    point_to_dict,
)


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value}")
    return value


def _check_dim(point, dim):
    if point.dim != dim:
        raise KernelTypeError(f"expected dimension {dim}, got {point.dim}")


# Weights: X -> R, used by rescale

@dataclass(frozen=True)
class ConstantWeight:
    value: float
    kind = 'constant'

    def __post_init__(self):
        object.__setattr__(self, 'value', _finite('value', self.value))

    def accepts(self, point):
        return isinstance(point, POINT_TYPES)

    def __call__(self, point):
        return self.value

    def to_dict(self):
        return {'kind': self.kind, 'value': self.value}


@dataclass(frozen=True)
class AffineWeight:
    """a + <b, x>."""

    offset: float
    slope: Tuple[float, ...]
    kind = 'affine'

    def __post_init__(self):
        object.__setattr__(self, 'offset', _finite('offset', self.offset))
        object.__setattr__(self, 'slope', _as_coords(self.slope, 'slope'))

    def accepts(self, point):
        return isinstance(point, Euclidean) and point.dim == len(self.slope)

    def __call__(self, point):
        return self.offset + dot(self.slope, point.coords)

    def to_dict(self):
        return {'kind': self.kind, 'offset': self.offset, 'slope': list(self.slope)}


@dataclass(frozen=True)
class NormExpWeight:
    """exp(-c |x|^2)."""

    rate: float
    kind = 'norm_exp'

    def __post_init__(self):
        object.__setattr__(self, 'rate', _finite('rate', self.rate))

    def accepts(self, point):
        return isinstance(point, Euclidean)

    def __call__(self, point):
        return math.exp(-self.rate * dot(point.coords, point.coords))

    def to_dict(self):
        return {'kind': self.kind, 'rate': self.rate}


@dataclass(frozen=True, eq=False)
class TableWeight:
    points: Tuple[object, ...]
    values: Tuple[float, ...]
    kind = 'table'

    def __post_init__(self):
        points = tuple(point_from_dict(p) for p in self.points)
        values = tuple(_finite('weight value', v) for v in self.values)
        if len(points) != len(values):
            raise ParameterError(
                f"weight table has {len(values)} values for {len(points)} points")
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, '_index', dict(zip(points, values)))

    def accepts(self, point):
        return point in self._index

    def __call__(self, point):
        return self._index[point]

    def to_dict(self):
        return {
            'kind': self.kind,
            'points': [point_to_dict(p) for p in self.points],
            'values': list(self.values),
        }


# Maps: X -> X~, used by pullback

@dataclass(frozen=True)
class IdentityMap:
    kind = 'identity'

    def accepts(self, point):
        return isinstance(point, POINT_TYPES)

    def __call__(self, point):
        return point

    def to_dict(self):
        return {'kind': self.kind}


@dataclass(frozen=True)
class ConstantMap:
    image: object
    kind = 'constant'

    def __post_init__(self):
        object.__setattr__(self, 'image', point_from_dict(self.image))

    def accepts(self, point):
        return isinstance(point, POINT_TYPES)

    def __call__(self, point):
        return self.image

    def to_dict(self):
        return {'kind': self.kind, 'image': point_to_dict(self.image)}


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> A x + b on Euclidean points."""

    matrix: np.ndarray
    offset: Tuple[float, ...] = None
    kind = 'affine'

    def __post_init__(self):
        a = np.atleast_2d(np.array(self.matrix, dtype=float))
        if a.ndim != 2 or not np.all(np.isfinite(a)):
            raise ParameterError("affine map needs a finite 2-d matrix")
        offset = (0.0,) * a.shape[0] if self.offset is None else _as_coords(self.offset, 'offset')
        if len(offset) != a.shape[0]:
            raise ParameterError(
                f"offset has length {len(offset)}, matrix has {a.shape[0]} rows")
        a.setflags(write=False)
        object.__setattr__(self, 'matrix', a)
        object.__setattr__(self, 'offset', offset)

    def accepts(self, point):
        return isinstance(point, Euclidean) and point.dim == self.matrix.shape[1]

    def __call__(self, point):
        _check_dim(point, self.matrix.shape[1])
        return Euclidean(tuple(
            dot(row, point.coords) + b for row, b in zip(self.matrix.tolist(), self.offset)))

    def to_dict(self):
        return {'kind': self.kind, 'matrix': self.matrix.tolist(), 'offset': list(self.offset)}


@dataclass(frozen=True)
class LiftMap:
    """Chart map R^m -> H^m, x -> (x, sqrt(1 + |x|^2))."""

    kind = 'lift'

    def accepts(self, point):
        return isinstance(point, Euclidean)

    def __call__(self, point):
        return Hyperboloid(point.coords, math.sqrt(1.0 + dot(point.coords, point.coords)))

    def to_dict(self):
        return {'kind': self.kind}


@dataclass(frozen=True, eq=False)
class TableMap:
    points: Tuple[object, ...]
    images: Tuple[object, ...]
    kind = 'table'

    def __post_init__(self):
        points = tuple(point_from_dict(p) for p in self.points)
        images = tuple(point_from_dict(p) for p in self.images)
        if len(points) != len(images):
            raise ParameterError(
                f"map table has {len(images)} images for {len(points)} points")
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'images', images)
        object.__setattr__(self, '_index', dict(zip(points, images)))

    def accepts(self, point):
        return point in self._index

    def __call__(self, point):
        return self._index[point]

    def to_dict(self):
        return {
            'kind': self.kind,
            'points': [point_to_dict(p) for p in self.points],
            'images': [point_to_dict(p) for p in self.images],
        }


# Functions: (0, inf) -> R, vectorized over numpy arrays

class Function:
    """A scalar function of t >= 0 that also accepts numpy arrays."""

    kind = None
    # set on the catalog members known to be constant
    constant = False

    def values(self, t):
        raise NotImplementedError

    def __call__(self, t):
        out = self.values(np.asarray(t, dtype=float))
        if np.ndim(out) == 0:
            return float(out)
        return out

    def to_dict(self):
        raise NotImplementedError


@dataclass(frozen=True)
class ExpDecay(Function):
    """exp(-c t)."""

    rate: float = 1.0
    kind = 'exp_decay'

    def __post_init__(self):
        rate = _finite('rate', self.rate)
        if rate < 0:
            raise ParameterError(f"rate must be >= 0, got {rate}")
        object.__setattr__(self, 'rate', rate)

    @property
    def constant(self):
        return self.rate == 0.0

    def values(self, t):
        return np.exp(-self.rate * t)

    def to_dict(self):
        return {'kind': self.kind, 'rate': self.rate}


@dataclass(frozen=True)
class PowerDecay(Function):
    """(1 + c t)^(-tau)."""

    rate: float = 1.0
    tau: float = 1.0
    kind = 'power_decay'

    def __post_init__(self):
        rate = _finite('rate', self.rate)
        tau = _finite('tau', self.tau)
        if rate < 0 or tau < 0:
            raise ParameterError("power_decay needs rate >= 0 and tau >= 0")
        object.__setattr__(self, 'rate', rate)
        object.__setattr__(self, 'tau', tau)

    @property
    def constant(self):
        return self.rate == 0.0 or self.tau == 0.0

    def values(self, t):
        return np.power(1.0 + self.rate * t, -self.tau)

    def to_dict(self):
        return {'kind': self.kind, 'rate': self.rate, 'tau': self.tau}


@dataclass(frozen=True)
class Power(Function):
    """t^beta."""

    beta: float = 1.0
    kind = 'power'

    def __post_init__(self):
        object.__setattr__(self, 'beta', _finite('beta', self.beta))

    @property
    def constant(self):
        return self.beta == 0.0

    def values(self, t):
        with np.errstate(divide='ignore'):
            return np.power(t, self.beta)

    def to_dict(self):
        return {'kind': self.kind, 'beta': self.beta}


@dataclass(frozen=True)
class AffineFunction(Function):
    """a + b t."""

    offset: float = 0.0
    slope: float = 1.0
    kind = 'affine'

    def __post_init__(self):
        object.__setattr__(self, 'offset', _finite('offset', self.offset))
        object.__setattr__(self, 'slope', _finite('slope', self.slope))

    @property
    def constant(self):
        return self.slope == 0.0

    def values(self, t):
        return self.offset + self.slope * t

    def to_dict(self):
        return {'kind': self.kind, 'offset': self.offset, 'slope': self.slope}


@dataclass(frozen=True)
class PowerShift(Function):
    """(1 + a t)^beta; a Bernstein function for a >= 0, 0 < beta <= 1."""

    rate: float = 1.0
    beta: float = 0.5
    kind = 'power_shift'

    def __post_init__(self):
        rate = _finite('rate', self.rate)
        if rate < 0:
            raise ParameterError(f"rate must be >= 0, got {rate}")
        object.__setattr__(self, 'rate', rate)
        object.__setattr__(self, 'beta', _finite('beta', self.beta))

    @property
    def constant(self):
        return self.rate == 0.0 or self.beta == 0.0

    def values(self, t):
        return np.power(1.0 + self.rate * t, self.beta)

    def to_dict(self):
        return {'kind': self.kind, 'rate': self.rate, 'beta': self.beta}


@dataclass(frozen=True)
class Log1p(Function):
    kind = 'log1p'

    def values(self, t):
        return np.log1p(t)

    def to_dict(self):
        return {'kind': self.kind}


@dataclass(frozen=True)
class LogShift(Function):
    """log(e + t), positive on [0, inf)."""

    kind = 'log_shift'

    def values(self, t):
        return np.log(math.e + t)

    def to_dict(self):
        return {'kind': self.kind}


@dataclass(frozen=True)
class SechPowerFunction(Function):
    """sech(t)^r."""

    r: float = 1.0
    kind = 'sech_power'

    def __post_init__(self):
        object.__setattr__(self, 'r', _finite('r', self.r))

    @property
    def constant(self):
        return self.r == 0.0

    def values(self, t):
        with np.errstate(over='ignore'):
            return np.power(np.cosh(t), -self.r)

    def to_dict(self):
        return {'kind': self.kind, 'r': self.r}


@dataclass(frozen=True)
class Sine(Function):
    kind = 'sine'

    def values(self, t):
        return np.sin(t)

    def to_dict(self):
        return {'kind': self.kind}


@dataclass(frozen=True, eq=False)
class TableFunction(Function):
    """Piecewise linear interpolation through (knots, values)."""

    knots: Tuple[float, ...]
    table: Tuple[float, ...]
    kind = 'table'

    def __post_init__(self):
        knots = _as_coords(self.knots, 'knots')
        table = _as_coords(self.table, 'table values')
        if len(knots) != len(table) or len(knots) < 2:
            raise ParameterError("function table needs matching knots and values, at least two")
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise ParameterError("function table knots must be strictly increasing")
        object.__setattr__(self, 'knots', knots)
        object.__setattr__(self, 'table', table)

    @property
    def constant(self):
        return len(set(self.table)) == 1

    def values(self, t):
        if np.any(t < self.knots[0]) or np.any(t > self.knots[-1]):
            raise InputError(
                f"function table covers [{self.knots[0]}, {self.knots[-1]}] only")
        return np.interp(t, self.knots, self.table)

    def to_dict(self):
        return {'kind': self.kind, 'knots': list(self.knots), 'values': list(self.table)}


WEIGHTS = {cls.kind: cls for cls in (ConstantWeight, AffineWeight, NormExpWeight, TableWeight)}
MAPS = {cls.kind: cls for cls in (IdentityMap, ConstantMap, AffineMap, LiftMap, TableMap)}
FUNCTIONS = {cls.kind: cls for cls in (
    ExpDecay, PowerDecay, Power, AffineFunction, PowerShift, Log1p, LogShift,
    SechPowerFunction, Sine, TableFunction,
)}
