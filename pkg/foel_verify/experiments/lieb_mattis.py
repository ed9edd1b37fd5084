"""
Energy-level ordering for bipartite spin-1/2 Heisenberg models.

H = Σ J_{xy} S_x·S_y with J ≥ 0 between the parts A and B and J ≤ 0 inside each part.
With 𝒮 = |S_A − S_B| the lowest energy E(S) of total spin S increases strictly for S ≥ 𝒮,
lies strictly above E(𝒮) for S < 𝒮, and the unique lowest vector of each M-subspace has
spin max(𝒮, |M|).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import networkx as nx
import numpy as np

from ..config import LIMITS, TOLERANCES, Limits, Tolerances
from ..errors import ModelError, SizeLimitError
from ..hilbert import HEISENBERG_EXCHANGE, assemble_two_site, sector_states
from ..quantum_group import casimir_operator, spin_from_casimir, spin_resolved_spectrum
from ..reports import Report
from ..schemas import LIEB_MATTIS_MODEL_SCHEMA, validate_input

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True)
class LiebMattisModel:
    sites: int
    couplings: Mapping[Pair, float]
    a_sites: frozenset[int]
    spins: tuple[float, ...] = field(default=())

    @property
    def b_sites(self) -> frozenset[int]:
        return frozenset(range(self.sites)) - self.a_sites

    @property
    def script_s(self) -> float:
        """𝒮 = |S_A − S_B| with every site carrying spin 1/2."""
        return abs(len(self.a_sites) - len(self.b_sites)) / 2

    def validate(self, limits: Limits = LIMITS) -> None:
        """
        Raises:
            ModelError: wrong sign pattern, disconnected couplings or a spin other than 1/2.
            SizeLimitError: the Hilbert space exceeds ``lieb_mattis_max_dim``.
        """
        if self.sites < 2:
            raise ModelError(f"A model needs at least 2 sites, got `{self.sites}`")
        if any(s != 0.5 for s in self.spins):
            raise ModelError("Only spin-1/2 sites are supported")
        if self.spins and len(self.spins) != self.sites:
            raise ModelError(f"`spins` lists {len(self.spins)} values for {self.sites} sites")
        if not self.a_sites <= frozenset(range(self.sites)):
            raise ModelError("Part A names a site outside the model")
        if 1 << self.sites > limits.lieb_mattis_max_dim:
            raise SizeLimitError(
                f"Dimension 2^{self.sites} exceeds {limits.lieb_mattis_max_dim}", sites=self.sites
            )

        graph = nx.Graph()
        graph.add_nodes_from(range(self.sites))
        for (x, y), J in self.couplings.items():
            if x == y or not (0 <= x < self.sites and 0 <= y < self.sites):
                raise ModelError(f"Coupling `{(x, y)}` is not a pair of distinct sites")
            across = (x in self.a_sites) != (y in self.a_sites)
            if across and J < 0:
                raise ModelError(f"Coupling `{(x, y)}` between A and B must be >= 0, got {J}")
            if not across and J > 0:
                raise ModelError(f"Coupling `{(x, y)}` inside one part must be <= 0, got {J}")
            if J != 0:
                graph.add_edge(x, y)
        if not nx.is_connected(graph):
            raise ModelError("Coupling graph is not connected")


def _model(sites: int, couplings: dict[Pair, float], a_sites: set[int]) -> LiebMattisModel:
    model = LiebMattisModel(sites, couplings, frozenset(a_sites), (0.5,) * sites)
    model.validate()
    return model


def antiferromagnetic_chain(L: int, J: float = 1.0) -> LiebMattisModel:
    """Nearest-neighbour chain with J > 0; A holds the even sites."""
    return _model(L, {(x, x + 1): J for x in range(L - 1)}, set(range(0, L, 2)))


def ferromagnetic_chain(L: int, J: float = -1.0) -> LiebMattisModel:
    """Nearest-neighbour chain with J < 0; every site is in A, so 𝒮 = L/2."""
    return _model(L, {(x, x + 1): J for x in range(L - 1)}, set(range(L)))


def solvable_cross_model(a_size: int, b_size: int, J: float = 1.0) -> LiebMattisModel:
    """J between every A–B pair, nothing inside the parts: H = J·S_A·S_B."""
    sites = a_size + b_size
    couplings = {(x, y): J for x in range(a_size) for y in range(a_size, sites)}
    return _model(sites, couplings, set(range(a_size)))


def model_from_document(document: Mapping[str, Any]) -> LiebMattisModel:
    """Model file: ``{"sites": N, "couplings": [[x, y, J], ...], "a_sites": [...]}``."""
    validate_input(document, LIEB_MATTIS_MODEL_SCHEMA, "Lieb-Mattis model")
    couplings: dict[Pair, float] = {}
    for x, y, J in document["couplings"]:
        key = (min(x, y), max(x, y))
        if key in couplings:
            raise ModelError(f"Coupling `{key}` listed twice")
        couplings[key] = float(J)
    sites = int(document["sites"])
    spins = tuple(float(s) for s in document.get("spins", [0.5] * sites))
    model = LiebMattisModel(sites, couplings, frozenset(document["a_sites"]), spins)
    model.validate()
    return model


def _bonds(model: LiebMattisModel) -> list[tuple[int, int, float]]:
    return [(x, y, float(J)) for (x, y), J in sorted(model.couplings.items()) if J != 0]


def lowest_spin_by_magnetization(
    model: LiebMattisModel, tolerances: Tolerances = TOLERANCES
) -> dict[float, Optional[float]]:
    """
    S(J, M): total spin of the lowest vector of each M ≥ 0 subspace.

    ``None`` marks a subspace whose lowest eigenvalue is degenerate.
    """
    L = model.sites
    out: dict[float, Optional[float]] = {}
    M = L / 2
    while M >= 0:
        states = sector_states(L, M)
        block = assemble_two_site(L, _bonds(model), HEISENBERG_EXCHANGE, states=states).toarray()
        values, vectors = np.linalg.eigh(block)
        if len(values) > 1 and values[1] - values[0] <= tolerances.strictness:
            out[M] = None
        else:
            v = vectors[:, 0]
            casimir = casimir_operator(L, M) @ v
            out[M] = spin_from_casimir(float(v @ casimir))
        M -= 1.0
    return out


def lieb_mattis_scan(model: LiebMattisModel, tolerances: Tolerances = TOLERANCES) -> Report:
    """E(S) for every total spin S and the ordering verdict around 𝒮."""
    model.validate()
    L = model.sites
    M = 0.0 if L % 2 == 0 else 0.5
    states = sector_states(L, M)
    ham = assemble_two_site(L, _bonds(model), HEISENBERG_EXCHANGE, states=states)
    by_spin = spin_resolved_spectrum(ham, L, M)
    energies = {S: float(values[0]) for S, values in sorted(by_spin.items())}
    target = model.script_s

    margins: list[dict[str, Any]] = []
    violations: list[dict[str, Any]] = []
    for S, E in energies.items():
        if S >= target and S + 1 in energies:
            record = {"S": S, "margin": energies[S + 1] - E, "kind": "above"}
        elif S < target:
            record = {"S": S, "margin": E - energies[target], "kind": "below"}
        else:
            continue
        margins.append(record)
        if not record["margin"] > tolerances.strictness:
            violations.append(record)

    lowest = lowest_spin_by_magnetization(model, tolerances)
    for m, spin in lowest.items():
        if spin != max(target, m):
            violations.append({"M": m, "spin": spin, "expected": max(target, m)})

    ground = min(energies, key=lambda S: (energies[S], S))
    logger.info("Lieb-Mattis scan on %d sites: ground spin %s, script S %s", L, ground, target)
    return Report(
        "lieb-mattis",
        not violations,
        margins,
        violations,
        {"strictness": tolerances.strictness},
        {
            "sites": L,
            "script_s": target,
            "ground_spin": ground,
            "energies": [{"S": S, "energy": E} for S, E in energies.items()],
            "lowest_spin_by_m": [{"M": m, "S": s} for m, s in lowest.items()],
        },
    )
