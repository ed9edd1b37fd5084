"""
Spin-1/2 Hilbert spaces on L sites: basis words, magnetization sectors and Hamiltonians.

A basis vector is an L-bit mask; bit value 0 is spin up, 1 is spin down, and site 0 is the
most significant bit. On two sites the ordered basis (++, +−, −+, −−) is therefore the
local index 0..3.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .config import LIMITS, TOLERANCES, Limits
from .errors import ParameterError, SectorError, SizeLimitError, SymmetryViolationError
from .lattice import TreeGraph

logger = logging.getLogger(__name__)

HalfInteger = Union[int, float, Fraction]
Bond = tuple[int, int, float]

# spin-1/2 matrices in the (+, −) basis
SPLUS = np.array([[0.0, 1.0], [0.0, 0.0]])
SMINUS = SPLUS.T.copy()
SZ = np.diag([0.5, -0.5])
ID2 = np.eye(2)

#: S_x · S_y on two sites
HEISENBERG_EXCHANGE = np.kron(SZ, SZ) + 0.5 * (np.kron(SPLUS, SMINUS) + np.kron(SMINUS, SPLUS))


@dataclass(frozen=True)
class SpinConfiguration:
    L: int
    mask: int

    def is_down(self, site: int) -> bool:
        return bool((self.mask >> (self.L - 1 - site)) & 1)

    @property
    def word(self) -> tuple[float, ...]:
        return tuple(-0.5 if self.is_down(x) else 0.5 for x in range(self.L))

    @property
    def magnetization(self) -> float:
        return sum(self.word)

    def __str__(self) -> str:
        return "".join("-" if self.is_down(x) else "+" for x in range(self.L))


@dataclass(frozen=True)
class AnisotropyParam:
    delta: float
    q: float

    @classmethod
    def from_delta(cls, delta: float) -> "AnisotropyParam":
        delta = float(delta)
        if not math.isfinite(delta):
            raise ParameterError(f"Anisotropy must be finite, got `{delta}`")
        if delta < 1.0:
            raise ParameterError(f"Anisotropy must satisfy delta >= 1, got `{delta}`")
        # (Δ−1)(Δ+1) keeps the root accurate next to Δ = 1
        root = math.sqrt((delta - 1.0) * (delta + 1.0))
        return cls(delta=delta, q=1.0 / (delta + root))

    @property
    def field(self) -> float:
        """sqrt(1 − Δ⁻²), the kink boundary-field strength per unit j."""
        inv = 1.0 / self.delta
        return math.sqrt((1.0 - inv) * (1.0 + inv))


ISOTROPIC = AnisotropyParam(1.0, 1.0)


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Real operator stored in CSR form; ``dimension`` is the side length."""

    dimension: int
    matrix: sp.csr_matrix = field(repr=False)
    symmetric: bool = False

    @classmethod
    def from_triplets(
        cls,
        dimension: int,
        rows: Iterable[int],
        cols: Iterable[int],
        values: Iterable[float],
        symmetric: bool = False,
    ) -> "SparseOperator":
        data = np.fromiter(values, dtype=float)
        r = np.fromiter(rows, dtype=np.int64)
        c = np.fromiter(cols, dtype=np.int64)
        coo = sp.coo_matrix((data, (r, c)), shape=(dimension, dimension))
        mat = coo.tocsr()
        mat.sum_duplicates()
        mat.eliminate_zeros()
        return cls(dimension, mat, symmetric)

    @property
    def entries(self) -> list[tuple[int, int, float]]:
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[k]), int(coo.col[k]), float(coo.data[k])) for k in order]

    def toarray(self) -> np.ndarray:
        return np.asarray(self.matrix.toarray())

    def __matmul__(self, other: np.ndarray) -> np.ndarray:
        return np.asarray(self.matrix @ other)

    def to_triplet_text(self) -> str:
        return "".join(f"{r} {c} {v!r}\n" for r, c, v in self.entries)


def popcount(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64)
    out = np.zeros_like(values)
    work = values.copy()
    while np.any(work):
        out += work & 1
        work >>= 1
    return out


def _down_count(L: int, M: HalfInteger) -> int:
    try:
        m = Fraction(M)
    except (TypeError, ValueError):
        raise SectorError(f"Magnetization `{M}` is not a number") from None
    if (2 * m).denominator != 1:
        raise SectorError(f"Magnetization `{M}` is not a half-integer")
    down = Fraction(L, 2) - m
    if down.denominator != 1 or not 0 <= down <= L:
        raise SectorError(f"No sector with magnetization `{M}` on {L} sites")
    return int(down)


@lru_cache(maxsize=64)
def _sector_states(L: int, down: int) -> np.ndarray:
    states = np.arange(1 << L, dtype=np.int64)
    states = states[popcount(states) == down]
    states.setflags(write=False)
    return states


def sector_states(L: int, M: HalfInteger, limits: Limits = LIMITS) -> np.ndarray:
    """Bitmasks of the M-sector, ascending."""
    if L > limits.sector_max_L:
        raise SizeLimitError(f"Sector work is limited to L <= {limits.sector_max_L}, got `{L}`")
    return _sector_states(L, _down_count(L, M))


def sector_basis(L: int, M: HalfInteger) -> list[SpinConfiguration]:
    """All configurations of magnetization M, ordered by ascending bitmask."""
    return [SpinConfiguration(L, int(s)) for s in sector_states(L, M)]


def interaction_matrix(aniso: AnisotropyParam) -> np.ndarray:
    """
    h = j² − S³S³ − Δ⁻¹(S¹S¹ + S²S²) + j√(1−Δ⁻²)(S³⊗1 − 1⊗S³), j = 1/2.

    The result is the rank-one projector onto q^{−1/2}|+−⟩ − q^{1/2}|−+⟩.
    """
    if aniso.delta < 1.0:
        raise ParameterError(f"Anisotropy must satisfy delta >= 1, got `{aniso.delta}`")
    j = 0.5
    transverse = 0.5 * (np.kron(SPLUS, SMINUS) + np.kron(SMINUS, SPLUS))
    return (
        j * j * np.eye(4)
        - np.kron(SZ, SZ)
        - transverse / aniso.delta
        + j * aniso.field * (np.kron(SZ, ID2) - np.kron(ID2, SZ))
    )


def assemble_two_site(
    L: int,
    bonds: Sequence[Bond],
    local: np.ndarray,
    states: Optional[np.ndarray] = None,
    symmetric: bool = True,
) -> SparseOperator:
    """
    Σ_b weight_b · local acting on sites (x_b, y_b), as a matrix on ``states``.

    ``states`` defaults to the full space. ``local`` must conserve the magnetization when
    ``states`` is a sector.
    """
    full = states is None
    if states is None:
        states = np.arange(1 << L, dtype=np.int64)
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    positions = np.arange(len(states), dtype=np.int64)
    for x, y, weight in bonds:
        px, py = L - 1 - x, L - 1 - y
        code = 2 * ((states >> px) & 1) + ((states >> py) & 1)
        clear = ~((1 << px) | (1 << py))
        for c in range(4):
            sel = code == c
            if not np.any(sel):
                continue
            src = states[sel]
            for r in range(4):
                value = weight * local[r, c]
                if value == 0.0:
                    continue
                dst = (src & clear) | ((r >> 1) << px) | ((r & 1) << py)
                if full:
                    target = dst
                else:
                    target = np.minimum(np.searchsorted(states, dst), len(states) - 1)
                    if np.any(states[target] != dst):
                        raise SymmetryViolationError("Local term leaves the magnetization sector")
                rows.append(target)
                cols.append(positions[sel])
                vals.append(np.full(len(src), value))
    dim = len(states)
    if not rows:
        return SparseOperator(dim, sp.csr_matrix((dim, dim)), symmetric)
    return SparseOperator.from_triplets(
        dim, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals), symmetric
    )


def chain_bonds(L: int, couplings: Optional[Sequence[float]] = None) -> list[Bond]:
    """Nearest-neighbour bonds; ``couplings`` longer than L−1 are used as a prefix."""
    if couplings is None:
        return [(x, x + 1, 1.0) for x in range(L - 1)]
    weights = [float(c) for c in couplings]
    if len(weights) < L - 1:
        raise ParameterError(f"Need {L - 1} couplings for L={L}, got {len(weights)}")
    if any(not (w > 0.0 and math.isfinite(w)) for w in weights[: L - 1]):
        raise ParameterError("Chain couplings must be positive and finite")
    return [(x, x + 1, weights[x]) for x in range(L - 1)]


def _check_full_size(L: int, limits: Limits) -> None:
    if L < 2:
        raise SizeLimitError(f"Need at least 2 sites, got `{L}`")
    if L > limits.full_space_max_L:
        raise SizeLimitError(
            f"Full-space work is limited to L <= {limits.full_space_max_L}, got `{L}`"
        )


def build_xxz_chain_hamiltonian(
    L: int,
    aniso: AnisotropyParam,
    couplings: Optional[Sequence[float]] = None,
    limits: Limits = LIMITS,
) -> SparseOperator:
    """H_[1,L] = Σ_x J_x h_{x,x+1} on the full 2^L space (J_x = 1 unless given)."""
    _check_full_size(L, limits)
    logger.debug("Building XXZ chain L=%d delta=%s", L, aniso.delta)
    return assemble_two_site(L, chain_bonds(L, couplings), interaction_matrix(aniso))


def build_xxx_graph_hamiltonian(tree: TreeGraph, limits: Limits = LIMITS) -> SparseOperator:
    """H_T = Σ_{x∼y} [1/4 − S_x·S_y]."""
    _check_full_size(tree.vertex_count, limits)
    bonds = [(u, v, 1.0) for u, v in tree.edges]
    return assemble_two_site(tree.vertex_count, bonds, interaction_matrix(ISOTROPIC))


def build_sector_hamiltonian(
    L: int,
    M: HalfInteger,
    aniso: Optional[AnisotropyParam] = None,
    tree: Optional[TreeGraph] = None,
    couplings: Optional[Sequence[float]] = None,
    limits: Limits = LIMITS,
) -> SparseOperator:
    """The chain (or tree, at Δ = 1) Hamiltonian built directly on the M-sector."""
    states = sector_states(L, M, limits)
    if tree is not None:
        if tree.vertex_count != L:
            raise ParameterError(f"Tree has {tree.vertex_count} vertices, expected {L}")
        bonds = [(u, v, 1.0) for u, v in tree.edges]
        local = interaction_matrix(ISOTROPIC)
    else:
        bonds = chain_bonds(L, couplings)
        local = interaction_matrix(aniso or ISOTROPIC)
    return assemble_two_site(L, bonds, local, states=states)


def heisenberg_operator(L: int, couplings: Mapping[tuple[int, int], float]) -> SparseOperator:
    """Σ J_{xy} S_x·S_y on the full space."""
    bonds = [(x, y, float(J)) for (x, y), J in couplings.items() if J != 0.0]
    return assemble_two_site(L, bonds, HEISENBERG_EXCHANGE)


def total_spin_operators(L: int) -> tuple[SparseOperator, SparseOperator, SparseOperator]:
    """Classical (S⁺, S⁻, S³) totals on the full space."""
    states = np.arange(1 << L, dtype=np.int64)
    rows, cols = [], []
    for x in range(L):
        bit = 1 << (L - 1 - x)
        src = states[(states & bit) != 0]
        rows.append(src ^ bit)
        cols.append(src)
    r, c = np.concatenate(rows), np.concatenate(cols)
    dim = 1 << L
    splus = SparseOperator.from_triplets(dim, r, c, np.ones(len(r)))
    sminus = SparseOperator(dim, splus.matrix.T.tocsr())
    diagonal = 0.5 * (L - 2 * popcount(states)).astype(float)
    sz = SparseOperator(dim, sp.diags(diagonal).tocsr(), True)
    return splus, sminus, sz


def restrict_to_sector(
    op: SparseOperator, L: int, M: HalfInteger, tolerance: float = TOLERANCES.sector_leak
) -> np.ndarray:
    """
    Dense block of ``op`` on ``sector_basis(L, M)``.

    Raises:
        SymmetryViolationError: ``op`` couples the sector to the rest of the space.
    """
    if op.dimension != 1 << L:
        raise ParameterError(f"Operator dimension {op.dimension} does not match L={L}")
    states = sector_states(L, M)
    outside = np.setdiff1d(np.arange(op.dimension), states, assume_unique=True)
    mat = op.matrix.tocsc()
    col_block = mat[:, states]
    if len(outside):
        leak = abs(col_block[outside, :]).max() if col_block[outside, :].nnz else 0.0
        row_leak_block = op.matrix[states, :][:, outside]
        row_leak = abs(row_leak_block).max() if row_leak_block.nnz else 0.0
        if max(leak, row_leak) > tolerance:
            raise SymmetryViolationError(
                f"Operator does not preserve the M={M} sector (leak {max(leak, row_leak):.3e})"
            )
    return np.asarray(col_block[states, :].toarray())


def one_magnon_ground_state(L: int, aniso: AnisotropyParam) -> np.ndarray:
    """Ψ₀ = Σ_x q^x S_x^−|↑⟩ on the full space, sites counted from 1 in the exponent."""
    psi = np.zeros(1 << L)
    for x in range(L):
        psi[1 << (L - 1 - x)] = aniso.q ** (x + 1)
    return psi
