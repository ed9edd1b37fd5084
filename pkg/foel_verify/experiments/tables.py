"""
Energy tables ℰ(L, n) over a grid of chain lengths and arc counts.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Literal, Optional, Sequence

import numpy as np

from ..config import LIMITS, TOLERANCES, Limits, Tolerances, thread_count
from ..errors import FoelError, InvalidInputError, PipelineMismatchError, SizeLimitError
from ..hilbert import AnisotropyParam
from ..quantum_group import sector_energy_oracle, sector_multiplicity
from ..spectra import smallest_eigenvalue_perron
from ..tl_diagrams import sector_matrix

logger = logging.getLogger(__name__)

Method = Literal["diagram", "oracle", "both"]
METHODS: tuple[str, ...] = ("diagram", "oracle", "both")

# past this dimension the Perron iteration works on the CSR form
_SPARSE_FROM = 200


@dataclass(frozen=True)
class EnergyEntry:
    energy: float
    dimension: int
    method: str


@dataclass
class EnergyTable:
    delta: float
    L_max: int
    n_max: Optional[int] = None
    entries: dict[tuple[int, int], EnergyEntry] = field(default_factory=dict)
    limits: Limits = LIMITS

    def energy(self, L: int, n: int) -> float:
        return self.entries[(L, n)].energy

    def has(self, L: int, n: int) -> bool:
        return (L, n) in self.entries

    def lengths(self) -> list[int]:
        return sorted({L for L, _ in self.entries})

    def row(self, L: int) -> list[float]:
        """ℰ(L, 0), ℰ(L, 1), … for the consecutive arc counts present."""
        out = []
        n = 0
        while (L, n) in self.entries:
            out.append(self.entries[(L, n)].energy)
            n += 1
        return out

    @property
    def complete(self) -> bool:
        """Every cell of :func:`grid` for this table's ``L_max``, ``n_max`` and limits."""
        return all(
            cell in self.entries for cell in grid(self.L_max, self.n_max, limits=self.limits)
        )

    def rows(self) -> Iterator[tuple[int, int, float, EnergyEntry]]:
        """CSV rows ``(L, n, delta, entry)`` in (L, n) order."""
        for (L, n) in sorted(self.entries):
            yield L, n, self.delta, self.entries[(L, n)]


def grid(
    L_max: int,
    n_max: Optional[int] = None,
    L_min: int = 2,
    limits: Optional[Limits] = None,
) -> list[tuple[int, int]]:
    """
    Cells (L, n) in (L, n) order.

    Without ``n_max``, ``limits`` caps n on the lengths only the diagram basis reaches.
    """
    cells = []
    for L in range(L_min, L_max + 1):
        if n_max is not None:
            top = min(L // 2, n_max)
        elif limits is not None:
            top = limits.max_arc_count(L)
        else:
            top = L // 2
        cells.extend((L, n) for n in range(top + 1))
    return cells


def diagram_energy(
    L: int,
    n: int,
    aniso: AnisotropyParam,
    couplings: Optional[Sequence[float]] = None,
    tolerances: Tolerances = TOLERANCES,
    limits: Limits = LIMITS,
) -> float:
    """Smallest eigenvalue of A_{L,n} by the Perron shift."""
    A = sector_matrix(L, n, aniso, couplings=couplings, limits=limits)
    matrix = A.sparse() if A.dimension > _SPARSE_FROM else A.entries
    result = smallest_eigenvalue_perron(matrix, tolerances=tolerances, limits=limits)
    return result.smallest_eigenvalue


def _check_limits(cells: list[tuple[int, int]], method: str, limits: Limits) -> None:
    for L, n in cells:
        if method in ("diagram", "both") and not limits.diagram_allowed(L, n):
            raise SizeLimitError(f"Diagram basis not allowed for L={L}, n={n}", L=L, n=n)
        if method in ("oracle", "both") and L > limits.oracle_max_L:
            raise SizeLimitError(f"Oracle limited to L <= {limits.oracle_max_L}", L=L, n=n)


def energy_table(
    L_max: int,
    delta: float,
    method: Method = "diagram",
    n_max: Optional[int] = None,
    couplings: Optional[Sequence[float]] = None,
    threads: Optional[int] = None,
    tolerances: Tolerances = TOLERANCES,
    limits: Limits = LIMITS,
) -> EnergyTable:
    """
    ℰ(L, n) for 2 ≤ L ≤ L_max and 0 ≤ n ≤ min(⌊L/2⌋, n_max).

    Without ``n_max`` every n is tabulated up to ``limits.oracle_max_L`` and
    n ≤ ``limits.diagram_max_n`` beyond it.

    ``method="both"`` runs the diagram basis and the highest-weight oracle side by side and
    raises :class:`PipelineMismatchError` when they disagree.
    """
    if method not in METHODS:
        raise InvalidInputError(f"Unknown method `{method}`, expected one of {METHODS}")
    if L_max < 2:
        raise InvalidInputError(f"`L_max` must be at least 2, got {L_max}")
    aniso = AnisotropyParam.from_delta(delta)
    cells = grid(L_max, n_max, limits=limits)
    _check_limits(cells, method, limits)

    def solve(cell: tuple[int, int]) -> EnergyEntry:
        L, n = cell
        try:
            dim = sector_multiplicity(L, n)
            if method == "oracle":
                return EnergyEntry(sector_energy_oracle(L, n, aniso, couplings), dim, "oracle")
            value = diagram_energy(L, n, aniso, couplings, tolerances, limits)
            if method == "diagram":
                return EnergyEntry(value, dim, "diagram-basis")
            reference = sector_energy_oracle(L, n, aniso, couplings)
            if abs(value - reference) > tolerances.pipeline_agreement:
                raise PipelineMismatchError(
                    f"Diagram basis gives {value!r}, oracle gives {reference!r}",
                    difference=abs(value - reference),
                )
            return EnergyEntry(reference, dim, "both")
        except FoelError as e:
            raise e.with_context(L=L, n=n, delta=aniso.delta)

    workers = threads or thread_count()
    logger.info(
        "Energy table: delta=%s, L<=%d, %d sectors, method=%s, %d threads",
        aniso.delta,
        L_max,
        len(cells),
        method,
        workers,
    )
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(solve, cells))
    return EnergyTable(aniso.delta, L_max, n_max, dict(zip(cells, results)), limits)


def lower_hull(table: EnergyTable, L: int) -> list[float]:
    """ℰ̃(L, n) = min over r ≥ n of ℰ(L, r)."""
    row = table.row(L)
    return [float(v) for v in np.minimum.accumulate(row[::-1])[::-1]] if row else []


def ordering_level(
    table: EnergyTable, L: int, tolerance: float = TOLERANCES.strictness
) -> tuple[int, int]:
    """
    ``(level, strict_level)`` of ferromagnetic ordering for length L.

    ``level`` is the largest n with ℰ̃(L, m) = ℰ(L, m) for all m ≤ n; ``strict_level`` the
    largest n with ℰ̃(L, 0) < … < ℰ̃(L, n+1), or −1 when ℰ̃(L, 0) = ℰ̃(L, 1).
    """
    row = table.row(L)
    hull = lower_hull(table, L)
    level = -1
    for value, floor in zip(row, hull):
        if value - floor > tolerance:
            break
        level += 1
    strict_level = -1
    for k in range(len(hull) - 1):
        if hull[k + 1] - hull[k] <= tolerance:
            break
        strict_level = k
    return level, strict_level
