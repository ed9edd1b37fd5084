import json
from pathlib import Path

import numpy as np
import pytest

from foel_verify.core import FoelVerifier
from foel_verify.experiments import antiferromagnetic_chain
from foel_verify.lattice import build_chain, grow
from foel_verify.reports import Report
from foel_verify.tl_diagrams import embedding_index_map, sector_matrix

pytestmark = pytest.mark.usefixtures("keep_global_stats")


def make_verifier(tmp_path: Path, **kwargs) -> FoelVerifier:
    kwargs.setdefault("l_max", 5)
    kwargs.setdefault("delta_grid", (1.0, 2.0))
    return FoelVerifier(root_dir=tmp_path, **kwargs)


def test_constructor_validates_arguments(tmp_path: Path) -> None:
    with pytest.raises(ValueError):
        FoelVerifier(root_dir=tmp_path, l_max=1)
    with pytest.raises(ValueError):
        FoelVerifier(root_dir=tmp_path, delta_grid=())


def test_constructor_does_not_create_reports_dir(tmp_path: Path) -> None:
    make_verifier(tmp_path, save_reports=True)
    assert not (tmp_path / "__foel_reports__").exists()


def test_process_name(tmp_path: Path) -> None:
    v = make_verifier(tmp_path)
    assert v._process_name(["chain", 4, "foel"]) == "chain.4.foel"
    assert v._process_name("gap") == "gap"
    with pytest.raises(ValueError):
        v._process_name("")
    with pytest.raises(ValueError):
        v._process_name("a/b")


def test_tables_are_cached(tmp_path: Path) -> None:
    v = make_verifier(tmp_path)
    table = v.table(1.0)
    assert v.table(1.0) is table
    assert table.L_max == 5
    assert v.table(1.0, L_max=4) is not table
    long = v.table(1.0, L_max=12)
    assert long.complete
    assert long.has(10, 5)
    assert long.has(12, 4)
    assert not long.has(12, 5)


def test_chain_claims_hold(tmp_path: Path, keep_global_stats) -> None:
    v = make_verifier(tmp_path)
    assert v.assert_foel("foel").verdict
    assert v.assert_volume_monotonicity("volume", delta=1.5).verdict
    assert v.assert_kn_inequality("kn").verdict
    assert v.assert_gap_formula("gap", L_max=7).verdict
    assert keep_global_stats.verified == ["foel", "volume", "kn", "gap"]
    assert keep_global_stats.margins["foel"] > 0.0


def test_foel_with_both_pipelines(tmp_path: Path) -> None:
    report = make_verifier(tmp_path).assert_foel("foel-both", delta=1.25, method="both")
    assert report.payload["parts"] == ["foel"]


def test_save_reports(tmp_path: Path, keep_global_stats) -> None:
    v = make_verifier(tmp_path, save_reports=True)
    v.assert_foel(["chain", "foel"], delta=1.0)
    path = tmp_path / "__foel_reports__" / "chain.foel.json"
    document = json.loads(path.read_text(encoding="utf-8"))
    assert document["verdict"] is True
    assert document["name"] == "foel"
    assert keep_global_stats.saved == ["chain.foel.json"]


def test_violation_fails_the_test(tmp_path: Path, keep_global_stats) -> None:
    v = make_verifier(tmp_path)
    report = Report("custom", False, [], [{"n": 1, "margin": -1.0}])
    with pytest.raises(pytest.fail.Exception, match="Claim `broken` violated \\(custom\\)"):
        v.assert_report(report, "broken")
    assert keep_global_stats.violated == ["broken"]
    assert keep_global_stats.details["broken"] == '{"margin": -1.0, "n": 1}'


def test_violation_details_are_truncated(tmp_path: Path, keep_global_stats) -> None:
    v = make_verifier(tmp_path)
    report = Report("custom", False, [], [{"n": k} for k in range(25)])
    with pytest.raises(pytest.fail.Exception):
        v.assert_report(report, "many")
    assert keep_global_stats.details["many"].endswith("... 5 more")


def test_violated_report_is_still_saved(tmp_path: Path) -> None:
    v = make_verifier(tmp_path, save_reports=True)
    with pytest.raises(pytest.fail.Exception):
        v.assert_report(Report("custom", False, [], [{"n": 1}]), "broken")
    document = json.loads((tmp_path / "__foel_reports__" / "broken.json").read_text())
    assert document["verdict"] is False


@pytest.mark.parametrize("L, n", [(4, 1), (4, 2), (6, 3)])
def test_lemma_second_on_sectors(tmp_path: Path, L: int, n: int) -> None:
    v = make_verifier(tmp_path)
    A = sector_matrix(L, n, 1.5).entries
    B = sector_matrix(L + 1, n, 1.5).entries
    report = v.assert_lemma_second(A, B, embedding_index_map(L, n), "lemma", require_strict=True)
    assert report.payload["result"]["holds"]
    assert report.smallest_margin > 0.0


def test_lemma_second_rejects_bad_preconditions(tmp_path: Path) -> None:
    v = make_verifier(tmp_path)
    A = np.array([[1.0, -1.0], [-1.0, 1.0]])
    B = np.array([[1.0, -0.5], [-0.5, 1.0]])
    with pytest.raises(pytest.fail.Exception):
        v.assert_lemma_second(A, B, [0, 1], "lemma-bad")


def test_tree_claims(tmp_path: Path) -> None:
    v = make_verifier(tmp_path)
    star = grow(build_chain(2), [0, 0])
    assert v.assert_tree_level1(star[-1], "star-level1").verdict
    assert v.assert_tree_growth(star, "star-growth").verdict
    with pytest.raises(pytest.fail.Exception, match="non_strict"):
        v.assert_tree_growth(star, "star-growth-strict", require_strict=True)


def test_lieb_mattis_claim(tmp_path: Path) -> None:
    report = make_verifier(tmp_path).assert_lieb_mattis(antiferromagnetic_chain(4), "af4")
    assert report.payload["ground_spin"] == 0.0
