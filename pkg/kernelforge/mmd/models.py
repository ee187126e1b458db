import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from kernelforge.core.models import POINT_TYPES, as_point, point_to_dict
from kernelforge.exceptions import InputError


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Signed finite combination sum_k c_k delta_{x_k}.

    Weights may be negative and need not sum to one; points may repeat.
    """

    atoms: Tuple[Tuple[object, float], ...]

    def __post_init__(self):
        atoms = []
        for point, weight in self.atoms:
            point = point if isinstance(point, POINT_TYPES) else as_point(point)
            weight = float(weight)
            if not math.isfinite(weight):
                raise InputError(f"measure weight must be finite, got {weight}")
            atoms.append((point, weight))
        object.__setattr__(self, 'atoms', tuple(atoms))

    @classmethod
    def empirical(cls, points, total=1.0):
        """Equal weights summing to ``total``."""
        points = list(points)
        if not points:
            raise InputError("empirical measure needs at least one point")
        w = float(total) / len(points)
        return cls(tuple((p, w) for p in points))

    @property
    def points(self):
        return [p for p, _ in self.atoms]

    @property
    def weights(self):
        return np.array([w for _, w in self.atoms], dtype=float)

    def __len__(self):
        return len(self.atoms)

    def __add__(self, other):
        return DiscreteMeasure(self.atoms + other.atoms)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def scaled(self, alpha):
        return DiscreteMeasure(tuple((p, alpha * w) for p, w in self.atoms))

    def to_dict(self):
        return {'atoms': [{'point': point_to_dict(p), 'weight': w} for p, w in self.atoms]}


@dataclass(frozen=True)
class EnergyReport:
    """c^T G c for a measure with weights c and Gram G on its atoms."""

    value: float
    n_atoms: int
    kernel_id: str

    def to_dict(self):
        return {'value': self.value, 'n_atoms': self.n_atoms, 'kernel_id': self.kernel_id}
