"""
Generalized Hulthén bracket basis.

An arc diagram on L sites is a noncrossing set of n arcs in which no arc spans an unpaired
site. Each diagram α labels the vector φ_α: the bracket q^{−1/2}|+−⟩ − q^{1/2}|−+⟩ on every
arc and |+⟩ on every unpaired site. The φ_α of one (L, n) are linearly independent and span
the highest-weight vectors of spin L/2 − n, so H acts on them by a matrix A_{L,n}.

Rules are stated for h (one summand of H), bond i joining sites i and i+1. With
a = partner(i), b = partner(i+1):

* both unpaired: h φ_α = 0
* arc (i, i+1) present: h φ_α = φ_α
* otherwise: h φ_α = −1/(2Δ) φ_β, where β caps i and i+1 together and joins a with b

In Temperley-Lieb language U = −(q + q⁻¹)h satisfies U² = −(q + q⁻¹)U; the loop value
carries that sign throughout this module.
"""

import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .config import LIMITS, TOLERANCES, Limits
from .errors import (
    BondIndexError,
    IndependenceViolationError,
    InvalidInputError,
    SectorError,
    SizeLimitError,
)
from .hilbert import AnisotropyParam, build_sector_hamiltonian, chain_bonds, sector_states
from .quantum_group import check_arc_count

logger = logging.getLogger(__name__)

UNPAIRED = -1
Arc = tuple[int, int]
DeltaLike = Union[float, AnisotropyParam]


def _aniso(delta: DeltaLike) -> AnisotropyParam:
    return delta if isinstance(delta, AnisotropyParam) else AnisotropyParam.from_delta(delta)


def check_partners(partner: Sequence[int]) -> None:
    """
    Validate a partner array in one left-to-right scan.

    Raises:
        InvalidInputError: not an involution, crossing arcs, or an arc over an unpaired site.
    """
    L = len(partner)
    stack: list[int] = []
    for i, j in enumerate(partner):
        if j == UNPAIRED:
            if stack:
                arc = (stack[-1], partner[stack[-1]])
                raise InvalidInputError(f"Arc `{arc}` spans unpaired site {i}")
            continue
        if not 0 <= j < L or j == i or partner[j] != i:
            raise InvalidInputError(f"Partner array is not an involution at site {i}")
        if j > i:
            stack.append(i)
        elif not stack or stack[-1] != j:
            raise InvalidInputError(f"Arc `{(j, i)}` crosses another arc")
        else:
            stack.pop()


@dataclass(frozen=True)
class ArcDiagram:
    L: int
    partner: tuple[int, ...] = field(repr=False)

    @classmethod
    def from_arcs(cls, L: int, arcs: Sequence[Arc]) -> "ArcDiagram":
        partner = [UNPAIRED] * L
        for i, j in arcs:
            in_range = 0 <= i < L and 0 <= j < L
            if not in_range or partner[i] != UNPAIRED or partner[j] != UNPAIRED:
                raise InvalidInputError(f"Arc `{(i, j)}` is out of range or reuses a site")
            partner[i], partner[j] = j, i
        check_partners(partner)
        return cls(L, tuple(partner))

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple((i, j) for i, j in enumerate(self.partner) if j > i)

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    @property
    def unpaired(self) -> tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.partner) if j == UNPAIRED)

    def __str__(self) -> str:
        return format_diagram(self)


# ─────────────────────────── enumeration ───────────────────────────
@lru_cache(maxsize=None)
def _perfect(a: int, b: int) -> tuple[tuple[Arc, ...], ...]:
    """Noncrossing perfect matchings of sites a..b−1."""
    if a == b:
        return ((),)
    out = []
    for j in range(a + 1, b, 2):
        for inner in _perfect(a + 1, j):
            for rest in _perfect(j + 1, b):
                out.append(((a, j),) + inner + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _open(start: int, L: int, k: int) -> tuple[tuple[Arc, ...], ...]:
    """Diagrams on start..L−1 with k arcs; unpaired sites only at the top level."""
    if 2 * k > L - start:
        return ()
    if start == L:
        return ((),)
    out = list(_open(start + 1, L, k))
    for inside in range(k):
        j = start + 1 + 2 * inside
        if j >= L:
            break
        for inner in _perfect(start + 1, j):
            for rest in _open(j + 1, L, k - 1 - inside):
                out.append(((start, j),) + inner + rest)
    return tuple(out)


@lru_cache(maxsize=128)
def _enumerate(L: int, n: int) -> tuple[ArcDiagram, ...]:
    arc_lists = sorted(tuple(sorted(arcs)) for arcs in _open(0, L, n))
    return tuple(ArcDiagram.from_arcs(L, arcs) for arcs in arc_lists)


def enumerate_diagrams(L: int, n: int) -> list[ArcDiagram]:
    """All (L, n) diagrams, lexicographic on their sorted arc lists."""
    check_arc_count(L, n)
    return list(_enumerate(L, n))


def diagram_index(L: int, n: int) -> dict[tuple[Arc, ...], int]:
    return {d.arcs: k for k, d in enumerate(_enumerate(L, n))}


def embed(diagram: ArcDiagram, new_L: Optional[int] = None) -> ArcDiagram:
    """Same arcs, extra unpaired sites appended on the right."""
    new_L = diagram.L + 1 if new_L is None else new_L
    if new_L < diagram.L:
        raise InvalidInputError(f"Cannot embed an L={diagram.L} diagram into `{new_L}` sites")
    return ArcDiagram(new_L, diagram.partner + (UNPAIRED,) * (new_L - diagram.L))


def embedding_index_map(L: int, n: int) -> list[int]:
    """Position in the (L+1, n) list of each embedded (L, n) diagram."""
    index = diagram_index(L + 1, n)
    return [index[embed(d).arcs] for d in _enumerate(L, n)]


# ─────────────────────────── action of h ───────────────────────────
def h_action(
    bond: int, diagram: ArcDiagram, delta: DeltaLike
) -> Optional[tuple[float, ArcDiagram]]:
    """h_{bond,bond+1} φ_α as ``(coefficient, β)``, or ``None`` for zero."""
    L = diagram.L
    if not 0 <= bond < L - 1:
        raise BondIndexError(f"Bond `{bond}` outside 0..{L - 2}", L=L)
    p = diagram.partner
    a, b = p[bond], p[bond + 1]
    if a == UNPAIRED and b == UNPAIRED:
        return None
    if a == bond + 1:
        return 1.0, diagram
    new = list(p)
    new[bond], new[bond + 1] = bond + 1, bond
    if a != UNPAIRED:
        new[a] = b
    if b != UNPAIRED:
        new[b] = a
    return -0.5 / _aniso(delta).delta, ArcDiagram(L, tuple(new))


@dataclass(frozen=True, eq=False)
class SectorMatrix:
    """A_{L,n}; column α holds the expansion of H φ_α."""

    L: int
    n: int
    delta: float
    entries: np.ndarray = field(repr=False)
    diagrams: tuple[ArcDiagram, ...] = field(repr=False)

    @property
    def dimension(self) -> int:
        return int(self.entries.shape[0])

    def sparse(self) -> sp.csr_matrix:
        return sp.csr_matrix(self.entries)

    def principal_submatrix(self, indices: Sequence[int]) -> np.ndarray:
        idx = np.asarray(indices, dtype=int)
        return np.asarray(self.entries[np.ix_(idx, idx)])


def sector_matrix(
    L: int,
    n: int,
    delta: DeltaLike,
    couplings: Optional[Sequence[float]] = None,
    limits: Limits = LIMITS,
) -> SectorMatrix:
    check_arc_count(L, n)
    if not limits.diagram_allowed(L, n):
        raise SizeLimitError(f"Diagram basis not allowed for L={L}, n={n}", L=L, n=n)
    aniso = _aniso(delta)
    weights = [w for _, _, w in chain_bonds(L, couplings)]
    diagrams = _enumerate(L, n)
    index = diagram_index(L, n)
    A = np.zeros((len(diagrams), len(diagrams)))
    for col, alpha in enumerate(diagrams):
        for bond, weight in enumerate(weights):
            image = h_action(bond, alpha, aniso)
            if image is None:
                continue
            coef, beta = image
            A[index[beta.arcs], col] += weight * coef
    logger.debug("A_{%d,%d} at delta=%s: dimension %d", L, n, aniso.delta, len(diagrams))
    return SectorMatrix(L, n, aniso.delta, A, diagrams)


# ─────────────────────────── Hilbert-space realization ───────────────────────────
def _bracket_terms(diagram: ArcDiagram, q: float) -> tuple[np.ndarray, np.ndarray]:
    L = diagram.L
    masks = np.zeros(1, dtype=np.int64)
    coeffs = np.ones(1)
    left, right = q ** -0.5, -(q**0.5)
    for i, j in diagram.arcs:
        bi, bj = 1 << (L - 1 - i), 1 << (L - 1 - j)
        masks = np.concatenate([masks | bj, masks | bi])
        coeffs = np.concatenate([coeffs * left, coeffs * right])
    return masks, coeffs


def hulthen_vector(diagram: ArcDiagram, aniso: AnisotropyParam) -> np.ndarray:
    """φ_α on the full 2^L space."""
    vec = np.zeros(1 << diagram.L)
    masks, coeffs = _bracket_terms(diagram, aniso.q)
    np.add.at(vec, masks, coeffs)
    return vec


def hulthen_family(L: int, n: int, aniso: AnisotropyParam) -> np.ndarray:
    """Columns φ_α in coordinates of the M = L/2 − n sector, canonical order."""
    states = sector_states(L, L / 2 - n)
    diagrams = enumerate_diagrams(L, n)
    out = np.zeros((len(states), len(diagrams)))
    for col, d in enumerate(diagrams):
        masks, coeffs = _bracket_terms(d, aniso.q)
        np.add.at(out[:, col], np.searchsorted(states, masks), coeffs)
    return out


def gram_matrix(L: int, n: int, aniso: AnisotropyParam) -> np.ndarray:
    """
    G[α, β] = ⟨φ_α, φ_β⟩.

    Raises:
        IndependenceViolationError: G is not positive definite.
    """
    phi = hulthen_family(L, n, aniso)
    G = phi.T @ phi
    smallest = float(np.linalg.eigvalsh(G)[0]) if G.size else 1.0
    if smallest <= 0.0:
        raise IndependenceViolationError(
            f"Gram matrix is not positive definite (smallest eigenvalue {smallest:.3e})",
            L=L,
            n=n,
            delta=aniso.delta,
        )
    return G


@dataclass(frozen=True, eq=False)
class HilbertExpansion:
    entries: np.ndarray
    residual: float


def sector_matrix_from_hilbert(
    L: int, n: int, aniso: AnisotropyParam, couplings: Optional[Sequence[float]] = None
) -> HilbertExpansion:
    """Expand H φ_α in the φ family by least squares; the residual certifies the fit."""
    check_arc_count(L, n)
    if L < 2:
        raise SectorError(f"Need at least 2 sites, got `{L}`")
    phi = hulthen_family(L, n, aniso)
    ham = build_sector_hamiltonian(L, L / 2 - n, aniso, couplings=couplings)
    image = ham @ phi
    coeffs, *_ = np.linalg.lstsq(phi, image, rcond=None)
    residual = float(np.abs(phi @ coeffs - image).max()) if image.size else 0.0
    if residual > TOLERANCES.pipeline_agreement:
        logger.warning("H phi leaves the bracket span: residual %.3e (L=%d, n=%d)", residual, L, n)
    return HilbertExpansion(np.asarray(coeffs), residual)


# ─────────────────────────── text form ───────────────────────────
_ARC_RE = re.compile(r"\((\d+),(\d+)\)")


def format_diagram(diagram: ArcDiagram) -> str:
    """``(1,2)(3,4)``; sites are 1-indexed, the empty diagram is ``()``."""
    if not diagram.arcs:
        return "()"
    return "".join(f"({i + 1},{j + 1})" for i, j in diagram.arcs)


def parse_diagram(text: str, L: int) -> ArcDiagram:
    text = text.strip()
    if text == "()":
        return ArcDiagram(L, (UNPAIRED,) * L)
    matches = list(_ARC_RE.finditer(text))
    if not matches or "".join(m.group(0) for m in matches) != text:
        raise InvalidInputError(f"Cannot parse diagram `{text}`")
    arcs = [(int(m.group(1)) - 1, int(m.group(2)) - 1) for m in matches]
    return ArcDiagram.from_arcs(L, [(min(a), max(a)) for a in arcs])


def iter_all_diagrams(L: int) -> Iterator[ArcDiagram]:
    for n in range(L // 2 + 1):
        yield from _enumerate(L, n)
