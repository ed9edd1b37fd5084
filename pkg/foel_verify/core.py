"""
Core logic of the plugin.
"""

import json
import logging
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import pathvalidate
import pytest

from .config import DEFAULT_DELTA_GRID, LIMITS, TOLERANCES, Limits, Tolerances
from .experiments import (
    EnergyTable,
    check_foel,
    check_gap_formula,
    check_kn_inequality,
    check_volume_monotonicity,
    energy_table,
    foel_summary,
    lieb_mattis_scan,
    tree_foel_level1,
    tree_gap_monotonicity,
)
from .experiments.lieb_mattis import LiebMattisModel
from .lattice import TreeGraph
from .reports import Report, combine
from .spectra import lemma_second_check
from .stats import GLOBAL_STATS
from .tools import atomic_write

NamePart = Union[str, int]
Name = Union[NamePart, Sequence[NamePart]]

# сколько нарушений показывать в сообщении pytest.fail
_SHOWN_VIOLATIONS = 20


class FoelVerifier:
    def __init__(
        self,
        root_dir: Path,
        l_max: int = 8,
        delta_grid: Iterable[float] = DEFAULT_DELTA_GRID,
        tolerances: Tolerances = TOLERANCES,
        limits: Limits = LIMITS,
        save_reports: bool = False,
        debug_mode: bool = False,
        reports_dir_name: str = "__foel_reports__",
    ):
        """
        Initializes FoelVerifier.

        Args:
            root_dir: Directory of the test module
            l_max: Largest chain length of the cached energy tables (--foel-l-max)
            delta_grid: Anisotropies checked when an assertion names none
            save_reports: Write every report to ``reports_dir_name`` (--foel-save-reports)
        """
        self.root_dir: Path = root_dir
        self.l_max: int = l_max
        self.delta_grid: tuple[float, ...] = tuple(float(d) for d in delta_grid)
        self.tolerances: Tolerances = tolerances
        self.limits: Limits = limits
        self.save_reports: bool = save_reports
        self.debug_mode: bool = debug_mode
        self.reports_dir: Path = root_dir / reports_dir_name
        self._tables: dict[tuple[float, str, int], EnergyTable] = {}

        if self.l_max < 2:
            raise ValueError(f"Invalid `l_max`: expected at least 2, got {self.l_max}")
        if not self.delta_grid:
            raise ValueError("Anisotropy grid must not be empty")

        self.logger = logging.getLogger(__name__)
        if not self.logger.handlers:
            # добавляем вывод в stderr
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
            self.logger.addHandler(handler)
        self.logger.setLevel(logging.DEBUG if debug_mode else logging.INFO)

    def _process_name(self, name: Name) -> str:
        """
        Joins list names with "." and checks the result is a valid file name.

        Returns:
            str
        Raises:
            ValueError
        """
        __tracebackhide__ = not self.debug_mode  # прячем из стека pytest

        if isinstance(name, (list, tuple)):
            name = ".".join(str(part) for part in name)
        else:
            name = str(name)

        if not name:
            raise ValueError("Claim name must be a non-empty string")

        try:
            # auto подберёт правила под текущую ОС
            pathvalidate.validate_filename(name, platform="auto")
        except pathvalidate.ValidationError as e:
            raise ValueError(f"Invalid claim name: {e}") from None

        return name

    def table(
        self, delta: float, L_max: Optional[int] = None, method: str = "diagram"
    ) -> EnergyTable:
        """Energy table for one anisotropy, computed once per session."""
        L_max = L_max or self.l_max
        key = (float(delta), method, L_max)
        if key not in self._tables:
            self.logger.debug("Computing energy table %s", key)
            self._tables[key] = energy_table(
                L_max,
                float(delta),
                method,  # type: ignore[arg-type]
                tolerances=self.tolerances,
                limits=self.limits,
            )
        return self._tables[key]

    def _deltas(self, delta: Optional[float]) -> tuple[float, ...]:
        return self.delta_grid if delta is None else (float(delta),)

    def _record(self, report: Report, name: Name) -> Report:
        """
        Writes statistics, saves the report if asked and fails the test on a violation.
        """
        __tracebackhide__ = not self.debug_mode  # прячем из стека pytest

        real_name = self._process_name(name)

        if self.save_reports:
            self.reports_dir.mkdir(parents=True, exist_ok=True)
            file_name = f"{real_name}.json"
            atomic_write(self.reports_dir / file_name, report.dumps())
            GLOBAL_STATS.add_saved(file_name)

        if report.verdict:
            GLOBAL_STATS.add_verified(real_name, report.smallest_margin)
            return report

        shown = report.violations[:_SHOWN_VIOLATIONS]
        details = "\n".join(json.dumps(v, sort_keys=True, default=float) for v in shown)
        if len(report.violations) > len(shown):
            details += f"\n... {len(report.violations) - len(shown)} more"
        GLOBAL_STATS.add_violated(real_name, details)
        self.logger.warning(f"Claim `{real_name}` violated ({report.name}).")
        pytest.fail(f"Claim `{real_name}` violated ({report.name}):\n{details}")

    def assert_report(self, report: Report, name: Name) -> Report:
        """Records an externally built report under ``name``."""
        __tracebackhide__ = not self.debug_mode
        return self._record(report, name)

    def assert_foel(
        self,
        name: Name,
        delta: Optional[float] = None,
        L_max: Optional[int] = None,
        method: str = "diagram",
    ) -> Report:
        """ℰ(L, n) strictly increasing in n for every cached length and anisotropy."""
        __tracebackhide__ = not self.debug_mode
        strictness = self.tolerances.strictness
        reports = []
        for d in self._deltas(delta):
            table = self.table(d, L_max, method)
            reports.append(foel_summary(check_foel(table, strictness), strictness))
        return self._record(combine("foel", reports), name)

    def assert_volume_monotonicity(
        self, name: Name, delta: Optional[float] = None, L_max: Optional[int] = None
    ) -> Report:
        __tracebackhide__ = not self.debug_mode
        reports = [
            check_volume_monotonicity(self.table(d, L_max), self.tolerances.strictness)
            for d in self._deltas(delta)
        ]
        return self._record(combine("volume-monotonicity", reports), name)

    def assert_kn_inequality(
        self, name: Name, delta: Optional[float] = None, L_max: Optional[int] = None
    ) -> Report:
        __tracebackhide__ = not self.debug_mode
        reports = [
            check_kn_inequality(self.table(d, L_max), self.tolerances.kn_inequality)
            for d in self._deltas(delta)
        ]
        return self._record(combine("kn-inequality", reports), name)

    def assert_gap_formula(
        self, name: Name, delta: Optional[float] = None, L_max: Optional[int] = None
    ) -> Report:
        __tracebackhide__ = not self.debug_mode
        reports = [
            check_gap_formula(
                L_max or self.l_max, d, self.tolerances.gap_formula, self.tolerances
            )
            for d in self._deltas(delta)
        ]
        return self._record(combine("gap-formula", reports), name)

    def assert_lemma_second(
        self,
        A: np.ndarray,
        B: np.ndarray,
        index_map: Sequence[int],
        name: Name,
        require_strict: bool = False,
    ) -> Report:
        """
        inf spec B ≤ inf spec A when A is embedded into B by ``index_map``.

        With ``require_strict`` the inequality must also be strict whenever the strictness
        condition holds.
        """
        __tracebackhide__ = not self.debug_mode
        verdict = lemma_second_check(A, B, index_map, self.tolerances)
        violations: list[object] = list(verdict.diagnostics)
        if not verdict.holds:
            violations.append({"inf_a": verdict.inf_a, "inf_b": verdict.inf_b})
        if require_strict and verdict.strict_condition and not verdict.strict:
            violations.append({"margin": verdict.margin, "strict_condition": True})
        report = Report(
            "lemma-second",
            not violations,
            [{"margin": verdict.margin}],
            violations,
            {
                "lemma_second": self.tolerances.lemma_second,
                "strictness": self.tolerances.strictness,
            },
            {"result": verdict.to_dict()},
        )
        return self._record(report, name)

    def assert_tree_level1(self, tree: TreeGraph, name: Name) -> Report:
        __tracebackhide__ = not self.debug_mode
        return self._record(tree_foel_level1(tree, self.tolerances), name)

    def assert_tree_growth(
        self, sequence: Sequence[TreeGraph], name: Name, require_strict: bool = False
    ) -> Report:
        """ℰ(L, 1) along a growth sequence; ``require_strict`` also rejects flat steps."""
        __tracebackhide__ = not self.debug_mode
        report = tree_gap_monotonicity(sequence, self.tolerances)
        if require_strict and not report.payload["strict"]:
            report.verdict = False
            report.violations.extend(
                {"L": L, "non_strict": True} for L in report.payload["non_strict_steps"]
            )
        return self._record(report, name)

    def assert_lieb_mattis(self, model: LiebMattisModel, name: Name) -> Report:
        __tracebackhide__ = not self.debug_mode
        return self._record(lieb_mattis_scan(model, self.tolerances), name)
