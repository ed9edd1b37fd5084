import pytest

from foel_verify.tl_diagrams import embedding_index_map, sector_matrix


def test_foel_on_default_grid(foel):
    """ℰ(L, n) строго растёт по n на всей сетке Δ."""
    foel.assert_foel("chain.foel")


def test_foel_pipelines_agree(foel):
    foel.assert_foel("chain.foel.both", delta=1.0, L_max=7, method="both")


def test_volume_monotonicity(foel):
    foel.assert_volume_monotonicity("chain.volume")


def test_kn_inequality(foel):
    foel.assert_kn_inequality("chain.kn")


def test_gap_formula(foel):
    foel.assert_gap_formula("chain.gap", L_max=12)


@pytest.mark.parametrize("delta", [1.0, 3.0])
@pytest.mark.parametrize("L, n", [(5, 2), (7, 3), (8, 2)])
def test_embedding_lowers_the_bottom(foel, L, n, delta):
    A = sector_matrix(L, n, delta).entries
    B = sector_matrix(L + 1, n, delta).entries
    foel.assert_lemma_second(
        A, B, embedding_index_map(L, n), ["chain", "lemma", L, n, delta], require_strict=True
    )
