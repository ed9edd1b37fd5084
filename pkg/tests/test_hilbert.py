import math

import numpy as np
import pytest

from foel_verify.config import Limits
from foel_verify.errors import (
    ParameterError,
    SectorError,
    SizeLimitError,
    SymmetryViolationError,
)
from foel_verify.hilbert import (
    ISOTROPIC,
    AnisotropyParam,
    SparseOperator,
    SpinConfiguration,
    build_sector_hamiltonian,
    build_xxx_graph_hamiltonian,
    build_xxz_chain_hamiltonian,
    heisenberg_operator,
    interaction_matrix,
    one_magnon_ground_state,
    restrict_to_sector,
    sector_basis,
    sector_states,
    total_spin_operators,
)
from foel_verify.lattice import build_chain, parse_tree


@pytest.mark.parametrize("delta", [1.0, 1.25, 1.5, 2.0, 3.0, 5.0])
def test_q_solves_delta(delta):
    aniso = AnisotropyParam.from_delta(delta)
    assert 0.0 < aniso.q <= 1.0
    assert (aniso.q + 1.0 / aniso.q) / 2.0 == pytest.approx(delta, rel=1e-14)


def test_q_near_isotropic_point():
    aniso = AnisotropyParam.from_delta(1.0000000001)
    assert aniso.q == pytest.approx(1.0 - 1.414e-5, abs=1e-8)
    assert (aniso.q + 1.0 / aniso.q) / 2.0 == pytest.approx(1.0000000001, rel=1e-14)


def test_q_at_five_quarters():
    assert AnisotropyParam.from_delta(1.25).q == 0.5


@pytest.mark.parametrize("delta", [0.5, float("nan"), float("inf"), -1.0])
def test_bad_delta(delta):
    with pytest.raises(ParameterError):
        AnisotropyParam.from_delta(delta)


@pytest.mark.parametrize("delta", [1.0, 1.5, 3.0])
def test_interaction_is_projector(delta):
    """h есть проектор ранга 1 на q^{-1/2}|+−⟩ − q^{1/2}|−+⟩."""
    aniso = AnisotropyParam.from_delta(delta)
    h = interaction_matrix(aniso)
    assert np.allclose(h @ h, h, atol=1e-14)
    assert np.trace(h) == pytest.approx(1.0)
    v = np.array([0.0, aniso.q**-0.5, -(aniso.q**0.5), 0.0])
    assert np.allclose(h @ v, v)


def test_interaction_at_delta_one_is_singlet_projector():
    h = interaction_matrix(ISOTROPIC)
    expected = np.zeros((4, 4))
    expected[1:3, 1:3] = [[0.5, -0.5], [-0.5, 0.5]]
    assert np.allclose(h, expected)


def test_spin_configuration():
    config = SpinConfiguration(4, 0b0101)
    assert str(config) == "+-+-"
    assert config.is_down(1) and not config.is_down(0)
    assert config.magnetization == 0.0


def test_sector_dimensions():
    assert len(sector_states(6, 1.0)) == math.comb(6, 2)
    assert len(sector_states(5, 0.5)) == math.comb(5, 2)
    assert [str(c) for c in sector_basis(3, 0.5)] == ["++-", "+-+", "-++"]


@pytest.mark.parametrize("L, M", [(4, 0.5), (4, 3.0), (3, 0.0), (3, "x")])
def test_bad_sector(L, M):
    with pytest.raises(SectorError):
        sector_states(L, M)


def test_sector_size_limit():
    with pytest.raises(SizeLimitError):
        sector_states(8, 0.0, limits=Limits(sector_max_L=6))


def test_chain_size_limit():
    with pytest.raises(SizeLimitError):
        build_xxz_chain_hamiltonian(6, ISOTROPIC, limits=Limits(full_space_max_L=5))


def test_chain_two_sites_is_h():
    aniso = AnisotropyParam.from_delta(2.0)
    H = build_xxz_chain_hamiltonian(2, aniso)
    assert np.allclose(H.toarray(), interaction_matrix(aniso))


@pytest.mark.parametrize("delta", [1.0, 2.0])
def test_chain_is_frustration_free(delta):
    aniso = AnisotropyParam.from_delta(delta)
    H = build_xxz_chain_hamiltonian(5, aniso).toarray()
    values = np.linalg.eigvalsh(H)
    assert values[0] == pytest.approx(0.0, abs=1e-12)
    # нулевое подпространство: один мультиплет спина L/2
    assert int(np.sum(np.abs(values) < 1e-10)) == 6


@pytest.mark.parametrize("delta", [1.0, 1.5, 3.0])
@pytest.mark.parametrize("L", range(2, 11))
def test_chain_is_positive_semidefinite(L, delta):
    H = build_xxz_chain_hamiltonian(L, AnisotropyParam.from_delta(delta)).toarray()
    assert np.linalg.eigvalsh(H)[0] >= -1e-10


@pytest.mark.parametrize("L, M", [(5, 0.5), (6, 1.0), (6, 0.0)])
def test_sector_hamiltonian_matches_restriction(L, M):
    aniso = AnisotropyParam.from_delta(1.5)
    full = build_xxz_chain_hamiltonian(L, aniso)
    block = build_sector_hamiltonian(L, M, aniso)
    assert np.allclose(block.toarray(), restrict_to_sector(full, L, M), atol=1e-14)


def test_tree_sector_hamiltonian_matches_restriction():
    tree = parse_tree([(0, 1), (0, 2), (0, 3), (3, 4)])
    full = build_xxx_graph_hamiltonian(tree)
    block = build_sector_hamiltonian(5, 1.5, tree=tree)
    assert np.allclose(block.toarray(), restrict_to_sector(full, 5, 1.5))


def test_path_tree_equals_isotropic_chain():
    chain = build_xxz_chain_hamiltonian(5, ISOTROPIC)
    tree = build_xxx_graph_hamiltonian(build_chain(5))
    assert np.allclose(chain.toarray(), tree.toarray())


def test_couplings_prefix_and_positivity():
    aniso = AnisotropyParam.from_delta(1.25)
    J = [1.0, 2.0, 0.5, 3.0]
    H4 = build_xxz_chain_hamiltonian(4, aniso, couplings=J).toarray()
    H5 = build_xxz_chain_hamiltonian(5, aniso, couplings=J).toarray()
    # H_[1,L+1] − H_[1,L] ⊗ 1 ≥ 0
    diff = H5 - np.kron(H4, np.eye(2))
    assert np.linalg.eigvalsh(diff)[0] > -1e-12
    with pytest.raises(ParameterError):
        build_xxz_chain_hamiltonian(4, aniso, couplings=[1.0, -1.0, 1.0])
    with pytest.raises(ParameterError):
        build_xxz_chain_hamiltonian(4, aniso, couplings=[1.0])


def test_restrict_detects_leak():
    splus, _, _ = total_spin_operators(3)
    with pytest.raises(SymmetryViolationError):
        restrict_to_sector(splus, 3, 0.5)


def test_total_spin_commutator():
    splus, sminus, sz = total_spin_operators(4)
    comm = (splus.matrix @ sminus.matrix - sminus.matrix @ splus.matrix).toarray()
    assert np.allclose(comm, 2.0 * sz.toarray())


def test_heisenberg_operator_two_sites():
    op = heisenberg_operator(2, {(0, 1): 1.0})
    assert np.allclose(np.linalg.eigvalsh(op.toarray()), [-0.75, 0.25, 0.25, 0.25])


@pytest.mark.parametrize("delta", [1.0, 1.5, 5.0])
def test_one_magnon_ground_state_has_zero_energy(delta):
    aniso = AnisotropyParam.from_delta(delta)
    H = build_xxz_chain_hamiltonian(6, aniso)
    psi = one_magnon_ground_state(6, aniso)
    assert np.allclose(H @ psi, 0.0, atol=1e-13)


def test_sparse_operator_triplets():
    op = SparseOperator.from_triplets(2, [0, 1, 0], [0, 1, 0], [1.0, 0.5, 2.0])
    assert op.entries == [(0, 0, 3.0), (1, 1, 0.5)]
    assert op.to_triplet_text() == "0 0 3.0\n1 1 0.5\n"


def test_star_one_magnon_sector_is_half_laplacian():
    star = parse_tree([(0, 1), (0, 2), (0, 3)])
    block = restrict_to_sector(build_xxx_graph_hamiltonian(star), 4, 1.0)
    assert np.allclose(np.linalg.eigvalsh(block), [0.0, 0.5, 0.5, 2.0])
