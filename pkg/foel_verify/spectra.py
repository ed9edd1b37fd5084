"""
Eigenvalue solvers.

``smallest_eigenvalue_perron`` handles real matrices whose off-diagonal entries are all
non-positive: with C the largest diagonal entry, M = C·1 − A is entrywise non-negative and
λ₀(A) = C − ρ(M).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence, Union

import networkx as nx
import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.sparse.csgraph import connected_components

from .config import LIMITS, TOLERANCES, Limits, Tolerances
from .errors import (
    ComplexSpectrumError,
    ConvergenceError,
    DisconnectedError,
    PreconditionError,
    SizeLimitError,
)
from .lattice import TreeGraph

logger = logging.getLogger(__name__)

MatrixLike = Union[np.ndarray, sp.spmatrix]


@dataclass(frozen=True)
class PerronResult:
    smallest_eigenvalue: float
    # ρ(C·1 − A)
    spectral_radius_of_shift: float
    shift: float
    iterations: int
    residual: float
    method: str = "power"


def _as_square(matrix: MatrixLike) -> MatrixLike:
    if not sp.issparse(matrix):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2:
            raise PreconditionError(f"Expected a matrix, got an array of shape {matrix.shape}")
    if matrix.shape[0] != matrix.shape[1]:
        raise PreconditionError(f"Matrix must be square, got shape {matrix.shape}")
    return matrix


def _dense(matrix: MatrixLike) -> np.ndarray:
    return np.asarray(matrix.toarray() if sp.issparse(matrix) else matrix, dtype=float)


def dense_spectrum(
    matrix: MatrixLike,
    symmetric: bool = False,
    tolerances: Tolerances = TOLERANCES,
    limits: Limits = LIMITS,
) -> np.ndarray:
    """
    Ascending real eigenvalues.

    Raises:
        SizeLimitError: the matrix is too large for a dense solve.
        ComplexSpectrumError: a non-symmetric matrix has an eigenvalue off the real axis.
    """
    mat = _dense(_as_square(matrix))
    dim = mat.shape[0]
    if dim == 0:
        return np.zeros(0)
    if symmetric:
        if dim > limits.dense_symmetric_max:
            raise SizeLimitError(f"Dense symmetric solve limited to {limits.dense_symmetric_max}")
        return np.asarray(la.eigvalsh(mat))

    if dim > limits.dense_general_max:
        raise SizeLimitError(f"Dense general solve limited to {limits.dense_general_max}")
    values = la.eigvals(mat)
    worst = float(np.abs(values.imag).max())
    if worst > tolerances.complex_imag:
        raise ComplexSpectrumError(f"Eigenvalue with imaginary part {worst:.3e}", dimension=dim)
    return np.sort(values.real)


def max_positive_offdiagonal(matrix: MatrixLike) -> float:
    if sp.issparse(matrix):
        off = sp.csr_matrix(matrix - sp.diags(matrix.diagonal()))
        return float(off.data.max()) if off.nnz else 0.0
    off = np.array(matrix, dtype=float)
    np.fill_diagonal(off, 0.0)
    return float(off.max()) if off.size else 0.0


def _too_slow(distance: float, previous: float, iteration: int, tolerances: Tolerances) -> bool:
    """
    Whether the iteration will miss its budget at the current contraction rate.

    ``distance`` is the larger of the residual and the change in ρ, each measured in units
    of its stopping threshold; ``previous`` is the same quantity one window earlier.
    """
    if not np.isfinite(previous) or distance <= 1.0:
        return False
    ratio = distance / previous
    if ratio >= 1.0:
        return True
    windows_left = math.log(distance) / -math.log(ratio)
    projected = iteration + windows_left * tolerances.perron_stagnation_window
    return projected > tolerances.perron_max_iterations


def _arnoldi_perron(lazy: MatrixLike, start: np.ndarray) -> tuple[float, float]:
    """Perron root of the lazy matrix by implicitly restarted Arnoldi, with its residual."""
    dim = lazy.shape[0]
    op = sp.csr_matrix(lazy)
    values, vectors = spla.eigs(
        op, k=1, which="LR", v0=start, ncv=min(dim, 64), tol=0.0, maxiter=100 * dim
    )
    x = vectors[:, 0]
    # фиксируем фазу по наибольшей компоненте, вектор Перрона вещественный
    x = (x / x[np.argmax(np.abs(x))]).real
    root = float(values[0].real)
    residual = float(np.linalg.norm(op @ x - root * x) / np.linalg.norm(x))
    return root, residual


def smallest_eigenvalue_perron(
    matrix: MatrixLike,
    start: Optional[np.ndarray] = None,
    tolerances: Tolerances = TOLERANCES,
    limits: Limits = LIMITS,
) -> PerronResult:
    """
    Power iteration on the Perron shift of ``matrix``.

    The iteration runs on M + 1, which has the same Perron vector as M and no other
    eigenvalue of the same modulus, so bipartite patterns converge. Every
    ``perron_stagnation_window`` steps the contraction rate is measured; when it cannot
    reach the stopping thresholds within ``perron_max_iterations`` (a small Perron gap, or a
    non-simple Perron root) the dense solver takes over, or the Arnoldi method above the
    dense size limit.

    Raises:
        PreconditionError: a positive off-diagonal entry.
        ConvergenceError: the Arnoldi fallback did not converge either.
    """
    A = _as_square(matrix)
    dim = A.shape[0]
    worst = max_positive_offdiagonal(A)
    if worst > 0.0:
        raise PreconditionError(f"Off-diagonal entry {worst!r} is positive", dimension=dim)

    diag = np.asarray(A.diagonal(), dtype=float)
    C = float(diag.max())
    if sp.issparse(A):
        lazy = sp.csr_matrix((C + 1.0) * sp.identity(dim) - A)
    else:
        lazy = (C + 1.0) * np.eye(dim) - A

    v = np.ones(dim) if start is None else np.asarray(start, dtype=float)
    if np.any(v <= 0.0):
        raise PreconditionError("Start vector must be entrywise positive")
    v = v / np.linalg.norm(v)

    rho = 0.0
    residual = np.inf
    window_distance = np.inf
    iteration = 0
    for iteration in range(1, tolerances.perron_max_iterations + 1):
        w = lazy @ v
        new_rho = float(np.linalg.norm(w))
        residual = float(np.linalg.norm(w - new_rho * v))
        change = abs(new_rho - rho) / new_rho
        rho = new_rho
        v = w / new_rho
        if change < tolerances.perron_relative and residual < tolerances.perron_residual:
            return PerronResult(C - (rho - 1.0), rho - 1.0, C, iteration, residual)
        if iteration % tolerances.perron_stagnation_window == 0:
            distance = max(
                residual / tolerances.perron_residual, change / tolerances.perron_relative
            )
            if _too_slow(distance, window_distance, iteration, tolerances):
                break
            window_distance = distance

    if dim <= limits.dense_general_max or dim < 3:
        logger.warning(
            "Power iteration too slow (residual %.3e after %d steps), using dense spectrum",
            residual,
            iteration,
        )
        smallest = float(dense_spectrum(A, tolerances=tolerances, limits=limits)[0])
        return PerronResult(smallest, C - smallest, C, iteration, residual, method="dense")

    logger.warning(
        "Power iteration too slow (residual %.3e after %d steps), using Arnoldi for dimension %d",
        residual,
        iteration,
        dim,
    )
    try:
        root, residual = _arnoldi_perron(lazy, v)
    except spla.ArpackNoConvergence:
        raise ConvergenceError(
            f"Power iteration and Arnoldi did not converge for dimension {dim}",
            residual=residual,
            iterations=iteration,
        ) from None
    return PerronResult(C - (root - 1.0), root - 1.0, C, iteration, residual, method="arpack")


def is_irreducible(matrix: MatrixLike) -> bool:
    """Strong connectivity of the off-diagonal nonzero pattern."""
    A = _as_square(matrix)
    pattern = sp.csr_matrix(A)
    pattern.setdiag(0)
    pattern.eliminate_zeros()
    count, _ = connected_components(pattern, directed=True, connection="strong")
    return bool(count == 1)


@dataclass
class LemmaSecondVerdict:
    holds: bool
    inf_a: float
    inf_b: float
    # inf spec A − inf spec B
    margin: float
    strict: bool
    strict_condition: bool
    diagnostics: list[str] = field(default_factory=list)

    @property
    def preconditions_ok(self) -> bool:
        return not self.diagnostics

    def to_dict(self) -> dict[str, Any]:
        return {
            "holds": self.holds,
            "inf_a": self.inf_a,
            "inf_b": self.inf_b,
            "margin": self.margin,
            "strict": self.strict,
            "strict_condition": self.strict_condition,
            "diagnostics": list(self.diagnostics),
        }


def _smallest(matrix: np.ndarray, tolerances: Tolerances, limits: Limits = LIMITS) -> float:
    """Lowest real part; dense when small, the Perron shift otherwise."""
    if matrix.shape[0] > limits.dense_general_max:
        try:
            result = smallest_eigenvalue_perron(matrix, tolerances=tolerances, limits=limits)
        except PreconditionError:
            # the diagnostics already name the broken precondition
            return float("nan")
        return result.smallest_eigenvalue
    return float(np.min(la.eigvals(matrix).real)) if matrix.size else 0.0


def lemma_second_check(
    A: MatrixLike,
    B: MatrixLike,
    index_map: Sequence[int],
    tolerances: Tolerances = TOLERANCES,
) -> LemmaSecondVerdict:
    """
    Compare inf spec B with inf spec A when A sits inside B through ``index_map``.

    Precondition failures are collected in ``diagnostics``; they never raise.
    """
    a = _dense(_as_square(A))
    b = _dense(_as_square(B))
    k, size = a.shape[0], b.shape[0]
    idx = np.asarray(index_map, dtype=int)
    diagnostics: list[str] = []

    if len(idx) != k:
        diagnostics.append(f"index map has {len(idx)} entries for a {k}x{k} matrix")
    if len(set(idx.tolist())) != len(idx) or (len(idx) and (idx.min() < 0 or idx.max() >= size)):
        diagnostics.append("index map is not injective into the larger matrix")
    if max_positive_offdiagonal(a) > 0.0:
        diagnostics.append("A has a positive off-diagonal entry")
    if max_positive_offdiagonal(b) > 0.0:
        diagnostics.append("B has a positive off-diagonal entry")

    strict_condition = False
    if not diagnostics:
        overlap = b[np.ix_(idx, idx)]
        if np.any(overlap > a):
            i, j = np.argwhere(overlap > a)[0]
            diagnostics.append(f"b[{idx[i]},{idx[j]}] exceeds a[{i},{j}]")
        else:
            unmapped = np.setdiff1d(np.arange(size), idx)
            couples_out = bool(
                len(unmapped)
                and (np.any(b[np.ix_(idx, unmapped)] != 0) or np.any(b[np.ix_(unmapped, idx)] != 0))
            )
            below = overlap < a
            np.fill_diagonal(below, False)
            strict_condition = is_irreducible(b) and (couples_out or bool(below.any()))

    inf_a = _smallest(a, tolerances)
    inf_b = _smallest(b, tolerances)
    margin = inf_a - inf_b
    return LemmaSecondVerdict(
        holds=inf_b <= inf_a + tolerances.lemma_second,
        inf_a=inf_a,
        inf_b=inf_b,
        margin=margin,
        strict=margin > tolerances.strictness,
        strict_condition=strict_condition,
        diagnostics=diagnostics,
    )


def fiedler_value(graph: Union[TreeGraph, nx.Graph]) -> float:
    """Second-smallest eigenvalue of the combinatorial Laplacian."""
    g = graph.to_networkx() if isinstance(graph, TreeGraph) else graph
    if g.number_of_nodes() < 2 or not nx.is_connected(g):
        raise DisconnectedError("Fiedler value needs a connected graph with two or more vertices")
    return float(np.sort(nx.laplacian_spectrum(g))[1])
