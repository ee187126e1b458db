import json
from dataclasses import dataclass, field
from typing import Any, Dict, List

from kernelforge.reports import jsonable


@dataclass
class RunReport:
    """Machine readable outcome of one CLI invocation.

    Serialized with sorted keys and no timestamps, so identical inputs and
    seed give identical bytes.
    """

    command: str
    inputs: Dict[str, str] = field(default_factory=dict)
    verdicts: List[Any] = field(default_factory=list)
    numbers: Dict[str, Any] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=dict)
    seed: int = 0
    passed: bool = True

    def add_verdict(self, verdict):
        self.verdicts.append(verdict)
        tolerances = getattr(verdict, 'tolerances', None)
        if tolerances:
            predicate = getattr(verdict, 'predicate', 'verdict')
            for name, value in tolerances.items():
                self.tolerances[f"{predicate}.{name}"] = value
        tol_used = getattr(verdict, 'tol_used', None)
        if tol_used is not None:
            self.tolerances[f"{type(verdict).__name__}.tol_used"] = tol_used

    def to_dict(self):
        return {
            'command': self.command,
            'inputs': dict(self.inputs),
            'verdicts': [jsonable(v) for v in self.verdicts],
            'numbers': jsonable(self.numbers),
            'tolerances': jsonable(self.tolerances),
            'seed': self.seed,
            'passed': bool(self.passed),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + '\n'
