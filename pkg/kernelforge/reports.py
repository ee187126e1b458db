"""Verdict objects shared by every predicate."""

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np


def jsonable(value):
    """Convert numpy values, tuples and dataclasses to plain JSON types."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        if hasattr(value, 'to_dict'):
            return value.to_dict()
        return {f.name: jsonable(getattr(value, f.name))
                for f in dataclasses.fields(value)}
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [jsonable(v) for v in items]
    return value


@dataclass(frozen=True)
class ClassReport:
    """Outcome of a structural predicate on a finite sample.

    ``witness`` points at what decided a failing verdict: an eigenvalue, an
    index pair, an index set or a weight vector.
    """

    predicate: str
    verdict: bool
    witness: Any = None
    tolerances: Mapping[str, float] = field(default_factory=dict)
    details: Mapping[str, Any] = field(default_factory=dict)

    def __bool__(self):
        return bool(self.verdict)

    def to_dict(self):
        return {
            'predicate': self.predicate,
            'verdict': bool(self.verdict),
            'witness': jsonable(self.witness),
            'tolerances': jsonable(self.tolerances),
            'details': jsonable(self.details),
        }
