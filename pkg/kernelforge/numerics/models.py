from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from kernelforge.constants import Constants
from kernelforge.exceptions import InputError


class PsdClass(str, Enum):
    PD = Constants.PSD_CLASS_PD
    PSD = Constants.PSD_CLASS_PSD
    INDEFINITE = Constants.PSD_CLASS_INDEFINITE


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Dense real symmetric matrix.

    The upper triangle is authoritative: the lower triangle is overwritten
    with its mirror image at construction. The stored array is read-only.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InputError("matrix has non-finite entries")
        upper = np.triu(a)
        a = upper + np.triu(a, 1).T
        a.setflags(write=False)
        object.__setattr__(self, 'entries', a)

    @property
    def n(self):
        return self.entries.shape[0]

    @property
    def max_abs(self):
        if self.n == 0:
            return 0.0
        return float(np.max(np.abs(self.entries)))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __len__(self):
        return self.n

    def tolist(self):
        return self.entries.tolist()


def as_sym_matrix(a):
    if isinstance(a, SymMatrix):
        return a
    if hasattr(a, 'matrix') and isinstance(a.matrix, SymMatrix):
        return a.matrix
    return SymMatrix(a)


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None

    @property
    def lambda_min(self):
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self):
        return float(self.eigenvalues[-1])

    def __len__(self):
        return len(self.eigenvalues)


@dataclass(frozen=True)
class PsdVerdict:
    """Finite-sample positive (semi)definiteness of a symmetric matrix.

    PD means lambda_min > pd_tol, INDEFINITE means lambda_min < -tol_used.
    pd_tol is never below tol_used.
    """

    psd_class: PsdClass
    lambda_min: float
    lambda_max: float
    tol_used: float
    pd_tol: float

    @property
    def is_pd(self):
        return self.psd_class is PsdClass.PD

    @property
    def is_psd(self):
        return self.psd_class is not PsdClass.INDEFINITE

    def to_dict(self):
        return {
            'class': self.psd_class.value,
            'lambda_min': self.lambda_min,
            'lambda_max': self.lambda_max,
            'tol_used': self.tol_used,
            'pd_tol': self.pd_tol,
        }
