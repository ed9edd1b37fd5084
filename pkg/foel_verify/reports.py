"""
Verification reports and their JSON form.
"""

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy

from .schemas import validate_report


def versions() -> dict[str, str]:
    from . import __version__

    return {"foel-verify": __version__, "numpy": np.__version__, "scipy": scipy.__version__}


def _plain(value: Any) -> Any:
    """numpy scalars and tuples into JSON-native values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass
class Report:
    """
    Outcome of one check.

    ``margins`` are the measured slacks (records with their (L, n) labels), ``violations``
    the subset that failed. ``payload`` carries check-specific data and is merged into the
    JSON document.
    """

    name: str
    verdict: bool
    margins: list[Any] = field(default_factory=list)
    violations: list[Any] = field(default_factory=list)
    tolerances: dict[str, float] = field(default_factory=dict)
    payload: dict[str, Any] = field(default_factory=dict)

    @property
    def smallest_margin(self) -> float | None:
        values = [m["margin"] for m in self.margins if isinstance(m, dict) and "margin" in m]
        return min(values) if values else None

    def to_json(self) -> dict[str, Any]:
        document: dict[str, Any] = {"name": self.name, **_plain(self.payload)}
        document.update(
            verdict=bool(self.verdict),
            margins=_plain(self.margins),
            violations=_plain(self.violations),
            tolerances=_plain(self.tolerances),
            versions=versions(),
        )
        validate_report(document)
        return document

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def combine(name: str, reports: list[Report]) -> Report:
    """Conjunction of several reports; their documents go under ``parts``."""
    tolerances: dict[str, float] = {}
    margins: list[Any] = []
    violations: list[Any] = []
    for r in reports:
        tolerances.update(r.tolerances)
        margins.extend({"check": r.name, **m} if isinstance(m, dict) else m for m in r.margins)
        violations.extend(
            {"check": r.name, **v} if isinstance(v, dict) else v for v in r.violations
        )
    return Report(
        name,
        all(r.verdict for r in reports),
        margins,
        violations,
        tolerances,
        {"parts": [r.name for r in reports]},
    )
