"""
SU_q(2) generators on the chain and the highest-weight (orthodox) route to ℰ(L, n).

The q-deformed generators used here are the ones commuting with the kink-field chain
built in :mod:`foel_verify.hilbert`::

    S⁺_q = Σ_x q^{+2 Σ_{y<x} S³_y} S⁺_x
    S⁻_q = Σ_x q^{−2 Σ_{y>x} S³_y} S⁻_x

Both reduce to the classical totals at q = 1.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .config import LIMITS, TOLERANCES, Limits
from .errors import (
    InternalConsistencyError,
    ParameterError,
    SectorError,
    SizeLimitError,
    SymmetryViolationError,
)
from .hilbert import (
    HEISENBERG_EXCHANGE,
    AnisotropyParam,
    HalfInteger,
    SparseOperator,
    assemble_two_site,
    build_sector_hamiltonian,
    popcount,
    restrict_to_sector,
    sector_states,
)

logger = logging.getLogger(__name__)


def q_from_delta(delta: float) -> AnisotropyParam:
    """Solve Δ = (q + q⁻¹)/2 on the branch q ∈ (0, 1]."""
    return AnisotropyParam.from_delta(delta)


def check_arc_count(L: int, n: int) -> None:
    if L < 0 or not 0 <= n <= L // 2:
        raise SectorError(f"Arc count `{n}` outside 0..{max(L, 0) // 2} for L={L}")


def sector_multiplicity(L: int, n: int) -> int:
    """Number of spin-(L/2 − n) multiplets: C(L, n) − C(L, n−1)."""
    check_arc_count(L, n)
    return math.comb(L, n) - (math.comb(L, n - 1) if n > 0 else 0)


def _flip_terms(
    L: int, states: np.ndarray, q: float, raising: bool
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(source positions, target masks, values) of S^±_q applied to ``states``."""
    positions = np.arange(len(states), dtype=np.int64)
    cols, targets, values = [], [], []
    for x in range(L):
        bit = 1 << (L - 1 - x)
        sel = (states & bit) != 0 if raising else (states & bit) == 0
        src = states[sel]
        if raising:
            # 2 Σ_{y<x} S³_y = x − 2·(downs left of x)
            downs = popcount(src >> (L - x)) if x > 0 else np.zeros_like(src)
            exponent = x - 2 * downs
        else:
            right = L - 1 - x
            downs = popcount(src & (bit - 1))
            exponent = -(right - 2 * downs)
        cols.append(positions[sel])
        targets.append(src ^ bit)
        values.append(np.power(q, exponent.astype(float)))
    return np.concatenate(cols), np.concatenate(targets), np.concatenate(values)


def _build_generator(L: int, aniso: AnisotropyParam, raising: bool) -> SparseOperator:
    if L < 1:
        raise ParameterError(f"Need at least one site, got `{L}`")
    states = np.arange(1 << L, dtype=np.int64)
    cols, rows, values = _flip_terms(L, states, aniso.q, raising)
    return SparseOperator.from_triplets(1 << L, rows, cols, values)


def build_raising(L: int, aniso: AnisotropyParam) -> SparseOperator:
    return _build_generator(L, aniso, raising=True)


def build_lowering(L: int, aniso: AnisotropyParam) -> SparseOperator:
    return _build_generator(L, aniso, raising=False)


def raising_block(L: int, M: HalfInteger, aniso: AnisotropyParam) -> np.ndarray:
    """S⁺_q from the M-sector into the (M+1)-sector, dense."""
    source = sector_states(L, M)
    target = sector_states(L, M + 1)
    cols, masks, values = _flip_terms(L, source, aniso.q, raising=True)
    rows = np.searchsorted(target, masks)
    block = sp.coo_matrix((values, (rows, cols)), shape=(len(target), len(source)))
    return np.asarray(block.toarray())


@dataclass(frozen=True, eq=False)
class HighestWeightBasis:
    """Orthonormal basis of ker(S⁺_q) in the M = L/2 − n sector."""

    L: int
    n: int
    states: np.ndarray = field(repr=False)
    # columns are basis vectors in sector coordinates
    sector_vectors: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return int(self.sector_vectors.shape[1])

    @cached_property
    def vectors(self) -> list[np.ndarray]:
        out = []
        for k in range(self.count):
            full = np.zeros(1 << self.L)
            full[self.states] = self.sector_vectors[:, k]
            out.append(full)
        return out


def highest_weight_basis(
    L: int,
    n: int,
    aniso: AnisotropyParam,
    permutation: Optional[Sequence[int]] = None,
    limits: Limits = LIMITS,
) -> HighestWeightBasis:
    """
    Null space of the raising block by singular-value thresholding.

    ``permutation`` reorders the sector coordinates before the decomposition; the spanned
    space must not depend on it.

    Raises:
        InternalConsistencyError: kernel dimension differs from :func:`sector_multiplicity`.
    """
    check_arc_count(L, n)
    if L > limits.full_space_max_L:
        raise SizeLimitError(
            f"Highest-weight extraction is limited to L <= {limits.full_space_max_L}, got `{L}`"
        )
    M = L / 2 - n
    states = sector_states(L, M)
    expected = sector_multiplicity(L, n)
    if n == 0:
        # top sector: nothing above it, the kernel is everything
        return HighestWeightBasis(L, n, states, np.eye(len(states)))

    block = raising_block(L, M, aniso)
    order = np.arange(len(states)) if permutation is None else np.asarray(permutation)
    _, sing, vh = np.linalg.svd(block[:, order], full_matrices=True)
    rank = int(np.sum(sing > TOLERANCES.kernel_threshold))
    kernel = np.empty((len(states), vh.shape[0] - rank))
    kernel[order, :] = vh[rank:].T
    if kernel.shape[1] != expected:
        raise InternalConsistencyError(
            f"Kernel of S+_q has dimension {kernel.shape[1]}, expected {expected}",
            L=L,
            n=n,
            delta=aniso.delta,
        )
    logger.debug("Highest-weight basis L=%d n=%d: %d vectors", L, n, expected)
    return HighestWeightBasis(L, n, states, kernel)


def sector_spectrum_oracle(
    L: int,
    n: int,
    aniso: AnisotropyParam,
    couplings: Optional[Sequence[float]] = None,
    permutation: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """Ascending spectrum of H compressed onto the highest-weight basis."""
    basis = highest_weight_basis(L, n, aniso, permutation=permutation)
    ham = build_sector_hamiltonian(L, L / 2 - n, aniso, couplings=couplings)
    V = basis.sector_vectors
    compressed = V.T @ (ham @ V)
    compressed = 0.5 * (compressed + compressed.T)
    return np.asarray(np.linalg.eigvalsh(compressed))


def sector_energy_oracle(
    L: int,
    n: int,
    aniso: AnisotropyParam,
    couplings: Optional[Sequence[float]] = None,
    permutation: Optional[Sequence[int]] = None,
) -> float:
    """ℰ(L, n): the reference value for every diagram-basis computation."""
    return float(sector_spectrum_oracle(L, n, aniso, couplings, permutation)[0])


def casimir_operator(L: int, M: Optional[HalfInteger] = None) -> SparseOperator:
    """Classical S_tot² = 3L/4 + 2 Σ_{x<y} S_x·S_y, on the full space or the M-sector."""
    states = None if M is None else sector_states(L, M)
    bonds = [(x, y, 2.0) for x in range(L) for y in range(x + 1, L)]
    pairs = assemble_two_site(L, bonds, HEISENBERG_EXCHANGE, states=states)
    dim = pairs.dimension
    mat = (pairs.matrix + 0.75 * L * sp.identity(dim, format="csr")).tocsr()
    return SparseOperator(dim, mat, True)


def spin_from_casimir(value: float) -> float:
    """Invert S(S+1) = value onto the nearest half-integer."""
    spin = 0.5 * (math.sqrt(1.0 + 4.0 * max(value, 0.0)) - 1.0)
    return round(2.0 * spin) / 2.0


def spin_resolved_spectrum(
    op: SparseOperator, L: int, M: Optional[HalfInteger] = None
) -> dict[float, np.ndarray]:
    """
    Ascending eigenvalues of ``op`` on each total-spin class.

    Works in one magnetization sector (the smallest |M| by default, which meets every S).
    ``op`` may be given on the full space or already on that sector; it must be SU(2)
    invariant.
    """
    if M is None:
        M = 0.0 if L % 2 == 0 else 0.5
    states = sector_states(L, M)
    if op.dimension == 1 << L:
        block = restrict_to_sector(op, L, M)
    elif op.dimension == len(states):
        block = op.toarray()
    else:
        raise ParameterError(f"Operator dimension {op.dimension} fits neither space of L={L}")

    casimir = casimir_operator(L, M).toarray()
    commutator = block @ casimir - casimir @ block
    if commutator.size and np.abs(commutator).max() > 1e-9:
        raise SymmetryViolationError("Operator does not commute with the total-spin Casimir")

    values, vectors = np.linalg.eigh(casimir)
    spins = np.array([spin_from_casimir(v) for v in values])
    out: dict[float, np.ndarray] = {}
    for spin in sorted(set(spins.tolist()), reverse=True):
        V = vectors[:, spins == spin]
        compressed = V.T @ block @ V
        out[spin] = np.asarray(np.linalg.eigvalsh(0.5 * (compressed + compressed.T)))
    return out
