"""
The isotropic ferromagnet on finite trees.

ℰ(L, n) on a tree comes from exact diagonalization with the classical Casimir as spin label;
the one-magnon value ℰ(L, 1) is half the Fiedler value of the tree.
"""

import logging
from typing import Any, Sequence

import networkx as nx
import numpy as np

from ..config import LIMITS, TOLERANCES, Limits, Tolerances
from ..errors import ParameterError, SizeLimitError
from ..hilbert import (
    HEISENBERG_EXCHANGE,
    assemble_two_site,
    build_sector_hamiltonian,
    sector_states,
)
from ..lattice import TreeGraph, check_growth_sequence, line_graph, tree_from_networkx
from ..quantum_group import spin_resolved_spectrum
from ..reports import Report
from ..spectra import dense_spectrum, fiedler_value

logger = logging.getLogger(__name__)

# 2(S_x·S_y − 1/4) = swap − 1, the exclusion generator of one edge
_EXCLUSION_EDGE = 2.0 * HEISENBERG_EXCHANGE - 0.5 * np.eye(4)


def enumerate_trees(max_vertices: int, min_vertices: int = 2) -> list[TreeGraph]:
    """Every tree on ``min_vertices..max_vertices`` vertices once up to isomorphism."""
    out: list[TreeGraph] = []
    for order in range(max(min_vertices, 2), max_vertices + 1):
        out.extend(tree_from_networkx(g) for g in nx.nonisomorphic_trees(order))
    return out


def tree_sector_energies(tree: TreeGraph, limits: Limits = LIMITS) -> list[float]:
    """ℰ(L, n) for n = 0..⌊L/2⌋, by exact diagonalization."""
    L = tree.vertex_count
    if L > limits.oracle_max_L:
        raise SizeLimitError(f"Tree diagonalization limited to L <= {limits.oracle_max_L}", L=L)
    M = 0.0 if L % 2 == 0 else 0.5
    ham = build_sector_hamiltonian(L, M, tree=tree, limits=limits)
    by_spin = spin_resolved_spectrum(ham, L, M)
    return [float(by_spin[L / 2 - n][0]) for n in range(L // 2 + 1)]


def one_magnon_energy(tree: TreeGraph) -> float:
    """Lowest spin-(L/2 − 1) energy: the second eigenvalue of the one-down-spin block."""
    L = tree.vertex_count
    ham = build_sector_hamiltonian(L, L / 2 - 1, tree=tree)
    return float(dense_spectrum(ham.toarray(), symmetric=True)[1])


def tree_foel_level1(tree: TreeGraph, tolerances: Tolerances = TOLERANCES) -> Report:
    """ℰ(L, 1) < ℰ(L, n) for every n > 1, and ℰ(L, 1) = Fiedler/2."""
    energies = tree_sector_energies(tree)
    half_fiedler = fiedler_value(tree) / 2.0
    margins: list[dict[str, Any]] = []
    violations: list[dict[str, Any]] = []
    for n in range(2, len(energies)):
        record = {"n": n, "margin": energies[n] - energies[1]}
        margins.append(record)
        if not record["margin"] > tolerances.strictness:
            violations.append(record)
    deviation = abs(energies[1] - half_fiedler)
    if deviation > tolerances.tree_fiedler:
        violations.append({"n": 1, "fiedler_deviation": deviation})
    return Report(
        "tree-level1",
        not violations,
        margins,
        violations,
        {"strictness": tolerances.strictness, "tree_fiedler": tolerances.tree_fiedler},
        {"tree": tree.to_document(), "energies": energies, "half_fiedler": half_fiedler},
    )


def tree_gap_monotonicity(
    sequence: Sequence[TreeGraph], tolerances: Tolerances = TOLERANCES
) -> Report:
    """
    ℰ(L, 1) along a leaf-by-leaf growth sequence.

    The verdict requires ℰ(L, 1) never to increase (beyond ``tree_fiedler``). Steps whose
    decrease is not above the strictness tolerance are listed under ``non_strict_steps``;
    growing a star at its centre is one.
    """
    check_growth_sequence(sequence)
    energies = [one_magnon_energy(t) for t in sequence]
    margins: list[dict[str, Any]] = []
    violations: list[dict[str, Any]] = []
    non_strict: list[int] = []
    for k in range(len(energies) - 1):
        L = sequence[k].vertex_count
        record = {"L": L, "n": 1, "margin": energies[k] - energies[k + 1]}
        margins.append(record)
        if record["margin"] < -tolerances.tree_fiedler:
            violations.append(record)
        elif not record["margin"] > tolerances.strictness:
            non_strict.append(L)
            logger.warning("One-magnon energy does not strictly drop at L=%d -> %d", L, L + 1)
    return Report(
        "tree-growth",
        not violations,
        margins,
        violations,
        {"strictness": tolerances.strictness, "tree_fiedler": tolerances.tree_fiedler},
        {"energies": energies, "non_strict_steps": non_strict, "strict": not non_strict},
    )


def ssep_generator(tree: TreeGraph, particles: int) -> np.ndarray:
    """Symmetric exclusion generator with unit edge rates on ``particles``-subsets."""
    L = tree.vertex_count
    if not 1 <= particles <= L - 1:
        raise ParameterError(f"Particle number must be in 1..{L - 1}, got `{particles}`")
    states = sector_states(L, L / 2 - particles)
    bonds = [(u, v, 1.0) for u, v in tree.edges]
    return assemble_two_site(L, bonds, _EXCLUSION_EDGE, states=states).toarray()


def ssep_spectral_gap(tree: TreeGraph, particles: int) -> float:
    """Smallest nonzero eigenvalue of minus the exclusion generator."""
    spectrum = dense_spectrum(-ssep_generator(tree, particles), symmetric=True)
    return float(spectrum[1])


def line_graph_comparison(tree: TreeGraph) -> dict[str, Any]:
    """
    H_T in the one-bracket basis φ_x = |x⟩ − |parent(x)⟩ against 1 − A_L, with A_L half the
    adjacency matrix of the line graph.

    Edges are indexed by their child vertex. The two matrices agree on chains; on branching
    trees sibling edges couple with +1/2 in H_T and −1/2 in 1 − A_L, which is recorded in
    ``mismatches``.
    """
    L = tree.vertex_count
    states = sector_states(L, L / 2 - 1)
    children = [x for x in range(L) if tree.parents[x] >= 0]
    pos = {x: int(np.searchsorted(states, 1 << (L - 1 - x))) for x in range(L)}
    phi = np.zeros((len(states), len(children)))
    for k, x in enumerate(children):
        phi[pos[x], k] += 1.0
        phi[pos[tree.parents[x]], k] -= 1.0
    ham = build_sector_hamiltonian(L, L / 2 - 1, tree=tree)
    actual, *_ = np.linalg.lstsq(phi, ham @ phi, rcond=None)

    lg = line_graph(tree)
    edge_of = {x: lg.vertices.index(tuple(sorted((x, tree.parents[x])))) for x in children}
    adj = lg.adjacency_matrix()
    order = [edge_of[x] for x in children]
    claimed = np.eye(len(children)) - 0.5 * adj[np.ix_(order, order)]

    mismatches = [
        {
            "edges": [children[i], children[j]],
            "actual": float(actual[i, j]),
            "claimed": float(claimed[i, j]),
        }
        for i in range(len(children))
        for j in range(len(children))
        if abs(actual[i, j] - claimed[i, j]) > 1e-12
    ]
    return {
        "actual": actual,
        "claimed": claimed,
        "actual_spectrum": dense_spectrum(actual),
        "claimed_spectrum": dense_spectrum(claimed, symmetric=True),
        "half_fiedler": fiedler_value(tree) / 2.0,
        "mismatches": mismatches,
        "matches": not mismatches,
    }
