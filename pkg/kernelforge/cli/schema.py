"""
KernelSpec JSON.

Leaves carry a ``family`` discriminator, combinators an ``op``
discriminator. Unknown discriminators and unknown fields are rejected.
A matrix valued family at kernel position is flattened onto channel
points.
"""

import dataclasses
from contextlib import contextmanager

from kernelforge.cnd import CmComposition, PowerDistance, SchoenbergTransform, SquaredDistance
from kernelforge.constants import Constants, choices_as_set
from kernelforge.core import (
    Constant, ExpDot, Flatten, Mixture, One, Pullback, Rescale, Schur, Table, Tensor,
)
from kernelforge.core.descriptors import FUNCTIONS, MAPS, WEIGHTS
from kernelforge.exceptions import KernelForgeError, ParseError
from kernelforge.families import (
    MATRIX_KERNELS, ConstantMatrix, GammaPowerMatrix, GneitingGeneral, GneitingSpec,
    MaternHilbertMatrix, MaternKernel, MaternParams, MaternProductMatrix, MatrixGaussian,
    RadialCmMixture, SeparableMatrix, gaussian, gneiting,
)
from kernelforge.hyperbolic import InverseLogConditional, Isotropic, MinkowskiForm, SechPower

FAMILIES = choices_as_set(Constants.FAMILY_CHOICES)
OPS = choices_as_set(Constants.OP_CHOICES)

# serialized key -> dataclass field, where they differ
_RENAMES = {('function', 'table'): {'values': 'table'}}


@contextmanager
def _malformed(where):
    """Bad field values surface as ParseError at the innermost node."""
    try:
        yield
    except KernelForgeError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ParseError(str(exc), field=where) from exc


def _object(data, where):
    if not isinstance(data, dict):
        raise ParseError(f"expected an object, got {type(data).__name__}", field=where)
    return data


def _fields(data, where, discriminator, required=(), optional=()):
    known = {discriminator, *required, *optional}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ParseError(f"unknown fields {unknown}", field=where)
    missing = [name for name in required if name not in data]
    if missing:
        raise ParseError(f"missing fields {missing}", field=where)
    return data


def _descriptor(registry, group, data, where):
    data = _object(data, where)
    kind = data.get('kind')
    if kind not in registry:
        raise ParseError(f"unknown {group} kind {kind!r}", field=f"{where}.kind")
    cls = registry[kind]
    renames = _RENAMES.get((group, kind), {})
    names = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key == 'kind':
            continue
        name = renames.get(key, key)
        if name not in names:
            raise ParseError(f"unknown field {key!r} for {group} {kind!r}", field=where)
        kwargs[name] = value
    with _malformed(where):
        return cls(**kwargs)


def weight_from_dict(data, where='weight'):
    return _descriptor(WEIGHTS, 'weight', data, where)


def map_from_dict(data, where='map'):
    return _descriptor(MAPS, 'map', data, where)


def function_from_dict(data, where='function'):
    return _descriptor(FUNCTIONS, 'function', data, where)


def matrix_from_dict(data, where='matrix'):
    with _malformed(where):
        return _matrix_node(_object(data, where), where)


def _matrix_node(data, where):
    family = data.get('family')
    if family not in MATRIX_KERNELS:
        raise ParseError(f"unknown matrix family {family!r}", field=f"{where}.family")
    if family == 'constant_matrix':
        _fields(data, where, 'family', ('a',))
        return ConstantMatrix(data['a'])
    if family == 'separable_matrix':
        _fields(data, where, 'family', ('a', 'kernel'))
        return SeparableMatrix(data['a'], spec_from_dict(data['kernel'], f"{where}.kernel"))
    if family == 'matrix_gaussian':
        _fields(data, where, 'family', ('a', 'gamma'))
        return MatrixGaussian(data['a'], data['gamma'])
    if family == 'matern_matrix':
        _fields(data, where, 'family', ('a', 'gamma', 'alphas', 'nus', 'm'))
        return MaternProductMatrix(
            matrix_from_dict(data['a'], f"{where}.a"),
            spec_from_dict(data['gamma'], f"{where}.gamma"),
            tuple(data['alphas']), tuple(data['nus']), data['m'])
    if family == 'matern_hilbert_matrix':
        _fields(data, where, 'family', ('a', 'gamma', 'nus'))
        return MaternHilbertMatrix(
            matrix_from_dict(data['a'], f"{where}.a"),
            spec_from_dict(data['gamma'], f"{where}.gamma"), tuple(data['nus']))
    _fields(data, where, 'family', ('gamma', 'nus'))
    return GammaPowerMatrix(spec_from_dict(data['gamma'], f"{where}.gamma"), tuple(data['nus']))


def _op_from_dict(data, where):
    op = data['op']
    if op not in OPS:
        raise ParseError(f"unknown op {op!r}", field=f"{where}.op")
    if op in ('schur', 'tensor'):
        _fields(data, where, 'op', ('left', 'right'))
        cls = Schur if op == 'schur' else Tensor
        return cls(spec_from_dict(data['left'], f"{where}.left"),
                   spec_from_dict(data['right'], f"{where}.right"))
    if op == 'rescale':
        _fields(data, where, 'op', ('inner', 'weight'))
        return Rescale(spec_from_dict(data['inner'], f"{where}.inner"),
                       weight_from_dict(data['weight'], f"{where}.weight"))
    if op == 'pullback':
        _fields(data, where, 'op', ('inner', 'map'))
        return Pullback(spec_from_dict(data['inner'], f"{where}.inner"),
                        map_from_dict(data['map'], f"{where}.map"))
    if op == 'mixture':
        _fields(data, where, 'op', ('atoms',))
        atoms = []
        for k, atom in enumerate(data['atoms']):
            here = f"{where}.atoms[{k}]"
            _fields(_object(atom, here), here, None, ('weight', 'kernel'))
            atoms.append((atom['weight'], spec_from_dict(atom['kernel'], f"{here}.kernel")))
        return Mixture(tuple(atoms))
    _fields(data, where, 'op', ('matrix',))
    return Flatten(matrix_from_dict(data['matrix'], f"{where}.matrix"))


def spec_from_dict(data, where='kernel'):
    """Kernel spec tree from its JSON form."""
    with _malformed(where):
        return _spec_node(_object(data, where), where)


def _spec_node(data, where):
    if 'op' in data:
        return _op_from_dict(data, where)
    family = data.get('family')
    if family not in FAMILIES:
        raise ParseError(f"unknown family {family!r}", field=f"{where}.family")
    if family in Constants.MATRIX_FAMILIES:
        return Flatten(matrix_from_dict(data, where))

    def fields(*required, optional=()):
        return _fields(data, where, 'family', required, optional)

    if family == 'one':
        fields()
        return One()
    if family == 'constant':
        fields('value')
        return Constant(data['value'])
    if family == 'exp_dot':
        fields(optional=('scale',))
        return ExpDot(data.get('scale', 1.0))
    if family == 'table':
        fields('points', 'values')
        return Table(tuple(data['points']), data['values'])
    if family == 'gaussian':
        fields('sigma')
        return gaussian(data['sigma'])
    if family == 'cm_mixture':
        fields('atoms')
        return RadialCmMixture(tuple(tuple(a) for a in data['atoms']))
    if family == 'gneiting_classic':
        fields('g', 'psi', 'm')
        return gneiting(GneitingSpec.classic(
            function_from_dict(data['g'], f"{where}.g"),
            function_from_dict(data['psi'], f"{where}.psi"), data['m']))
    if family == 'gneiting_general':
        fields('a', 'gamma', 'm')
        spec = GneitingSpec.general(
            spec_from_dict(data['a'], f"{where}.a"),
            spec_from_dict(data['gamma'], f"{where}.gamma"), data['m'])
        return GneitingGeneral(spec.a, spec.gamma, spec.m)
    if family == 'matern':
        fields('alpha', 'nu')
        return MaternKernel(MaternParams(data['alpha'], data['nu']))
    if family == 'sq_distance':
        fields()
        return SquaredDistance()
    if family == 'power_distance':
        fields('beta')
        return PowerDistance(data['beta'])
    if family == 'schoenberg':
        fields('gamma', 't')
        return SchoenbergTransform(spec_from_dict(data['gamma'], f"{where}.gamma"), data['t'])
    if family == 'cm_compose':
        fields('gamma', 'function')
        return CmComposition(spec_from_dict(data['gamma'], f"{where}.gamma"),
                             function_from_dict(data['function'], f"{where}.function"))
    if family == 'minkowski':
        fields()
        return MinkowskiForm()
    if family == 'sech_power':
        fields('r')
        return SechPower(data['r'])
    if family == 'isotropic':
        fields('atoms')
        return Isotropic(tuple(tuple(a) for a in data['atoms']))
    fields('kernel')
    return InverseLogConditional(spec_from_dict(data['kernel'], f"{where}.kernel"))
