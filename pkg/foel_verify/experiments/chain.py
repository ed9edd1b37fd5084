"""
Ordering and gap checks on chain energy tables.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from ..config import TOLERANCES, Tolerances
from ..hilbert import AnisotropyParam
from ..reports import Report
from ..spectra import smallest_eigenvalue_perron
from ..tl_diagrams import sector_matrix
from .tables import EnergyTable, lower_hull, ordering_level

logger = logging.getLogger(__name__)


@dataclass
class FoelReport:
    """Ordering of ℰ(L, ·) at one chain length."""

    delta: float
    L: int
    ordered: bool
    margins: list[float] = field(default_factory=list)
    violations: list[dict[str, Any]] = field(default_factory=list)
    level: int = 0
    strict_level: int = -1
    hull: list[float] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "delta": self.delta,
            "L": self.L,
            "ordered": self.ordered,
            "margins": list(self.margins),
            "violations": list(self.violations),
            "level": self.level,
            "strict_level": self.strict_level,
        }


def check_foel(table: EnergyTable, tolerance: float = TOLERANCES.strictness) -> list[FoelReport]:
    """One report per chain length; ``ordered`` iff every ℰ(L, n+1) − ℰ(L, n) > tolerance."""
    reports = []
    for L in table.lengths():
        row = table.row(L)
        margins = [row[n + 1] - row[n] for n in range(len(row) - 1)]
        violations = [
            {"L": L, "n": n, "margin": m} for n, m in enumerate(margins) if not m > tolerance
        ]
        level, strict_level = ordering_level(table, L, tolerance)
        reports.append(
            FoelReport(
                table.delta,
                L,
                not violations,
                margins,
                violations,
                level,
                strict_level,
                lower_hull(table, L),
            )
        )
        if violations:
            logger.warning("Energy levels out of order at L=%d: %s", L, violations)
    return reports


def foel_summary(reports: Sequence[FoelReport], tolerance: float = TOLERANCES.strictness) -> Report:
    margins = [
        {"L": r.L, "n": n, "delta": r.delta, "margin": m}
        for r in reports
        for n, m in enumerate(r.margins)
    ]
    violations = [{"delta": r.delta, **v} for r in reports for v in r.violations]
    return Report(
        "foel",
        all(r.ordered for r in reports),
        margins,
        violations,
        {"strictness": tolerance},
        {
            "levels": [
                {"L": r.L, "delta": r.delta, "level": r.level, "strict_level": r.strict_level}
                for r in reports
            ]
        },
    )


def check_volume_monotonicity(
    table: EnergyTable, tolerance: float = TOLERANCES.strictness
) -> Report:
    """ℰ(L+1, n) < ℰ(L, n) for n ≥ 1; the n = 0 column must vanish."""
    margins: list[dict[str, Any]] = []
    violations: list[dict[str, Any]] = []
    for (L, n), entry in sorted(table.entries.items()):
        if n == 0:
            if abs(entry.energy) > tolerance:
                violations.append({"L": L, "n": 0, "energy": entry.energy})
            continue
        if not table.has(L + 1, n):
            continue
        margin = entry.energy - table.energy(L + 1, n)
        record = {"L": L, "n": n, "margin": margin}
        margins.append(record)
        if not margin > tolerance:
            violations.append(record)
    return Report(
        "volume-monotonicity",
        not violations,
        margins,
        violations,
        {"strictness": tolerance},
        {"delta": table.delta},
    )


def check_kn_inequality(table: EnergyTable, tolerance: float = TOLERANCES.kn_inequality) -> Report:
    """
    ℰ(L+1, n) ≥ min{ℰ(L, n), ℰ(L, n−1)} wherever the right side is defined.

    For L odd and n = (L+1)/2 only ℰ(L, n−1) exists; that is the boundary case
    ℰ(L+1, (L+1)/2) ≥ ℰ(L, (L−1)/2).
    """
    margins: list[dict[str, Any]] = []
    violations: list[dict[str, Any]] = []
    for (L1, n), entry in sorted(table.entries.items()):
        L = L1 - 1
        candidates = [table.energy(L, k) for k in (n, n - 1) if k >= 0 and table.has(L, k)]
        if not candidates:
            continue
        margin = entry.energy - min(candidates)
        record = {"L": L1, "n": n, "margin": margin, "boundary": 2 * n == L1 and L % 2 == 1}
        margins.append(record)
        if margin < -tolerance:
            violations.append(record)
    return Report(
        "kn-inequality",
        not violations,
        margins,
        violations,
        {"kn_inequality": tolerance},
        {"delta": table.delta},
    )


def gap_formula(L: int, delta: float) -> float:
    return 1.0 - math.cos(math.pi / L) / delta


def check_gap_formula(
    L_max: int,
    delta: float,
    tolerance: float = TOLERANCES.gap_formula,
    tolerances: Tolerances = TOLERANCES,
) -> Report:
    """ℰ(L, 1) from the tridiagonal A_{L,1} against 1 − Δ⁻¹cos(π/L), L = 2..L_max."""
    aniso = AnisotropyParam.from_delta(delta)
    margins: list[dict[str, Any]] = []
    violations: list[dict[str, Any]] = []
    for L in range(2, L_max + 1):
        A = sector_matrix(L, 1, aniso)
        result = smallest_eigenvalue_perron(A.entries, tolerances=tolerances)
        energy = result.smallest_eigenvalue
        expected = gap_formula(L, aniso.delta)
        record = {
            "L": L,
            "n": 1,
            "energy": energy,
            "expected": expected,
            "deviation": abs(energy - expected),
        }
        margins.append(record)
        if record["deviation"] > tolerance:
            violations.append(record)
    worst = max((m["deviation"] for m in margins), default=0.0)
    return Report(
        "gap-formula",
        not violations,
        margins,
        violations,
        {"gap_formula": tolerance},
        {"delta": aniso.delta, "max_deviation": worst},
    )
