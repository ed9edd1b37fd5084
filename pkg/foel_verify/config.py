"""
Numeric defaults: size limits, tolerances and the anisotropy grid.
"""

import os
from dataclasses import asdict, dataclass
from typing import Any, Optional

DEFAULT_DELTA_GRID: tuple[float, ...] = (1.0, 1.25, 1.5, 2.0, 3.0, 5.0)


@dataclass(frozen=True)
class Limits:
    full_space_max_L: int = 14
    sector_max_L: int = 20
    oracle_max_L: int = 10
    diagram_max_L: int = 16
    # beyond oracle_max_L only sectors with n <= diagram_max_n are built
    diagram_max_n: int = 4
    dense_symmetric_max: int = 4096
    dense_general_max: int = 512
    lieb_mattis_max_dim: int = 4096

    def diagram_allowed(self, L: int, n: int) -> bool:
        if L <= self.oracle_max_L:
            return True
        return L <= self.diagram_max_L and n <= self.diagram_max_n

    def max_arc_count(self, L: int) -> int:
        """Largest n tabulated by default for length L."""
        if L <= self.oracle_max_L:
            return L // 2
        return min(L // 2, self.diagram_max_n)


@dataclass(frozen=True)
class Tolerances:
    strictness: float = 1e-8
    kn_inequality: float = 1e-10
    pipeline_agreement: float = 1e-9
    lemma_second: float = 1e-12
    gap_formula: float = 1e-10
    tree_fiedler: float = 1e-10
    sector_leak: float = 1e-12
    kernel_threshold: float = 1e-9
    complex_imag: float = 1e-8
    perron_relative: float = 1e-13
    perron_residual: float = 1e-10
    perron_max_iterations: int = 200_000
    # по этому окну оценивается скорость сходимости
    perron_stagnation_window: int = 5_000

    def with_strictness(self, value: Optional[float]) -> "Tolerances":
        if value is None:
            return self
        data = asdict(self)
        data["strictness"] = float(value)
        return Tolerances(**data)


LIMITS = Limits()
TOLERANCES = Tolerances()


def thread_count() -> int:
    """Worker count: ``THREADS`` if set, else the number of cores."""
    raw = os.environ.get("THREADS")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            value = 0
        if value > 0:
            return value
    return os.cpu_count() or 1


def defaults_dict() -> dict[str, Any]:
    return {
        "delta_grid": list(DEFAULT_DELTA_GRID),
        "limits": asdict(LIMITS),
        "tolerances": asdict(TOLERANCES),
        "threads_env": "THREADS",
    }
