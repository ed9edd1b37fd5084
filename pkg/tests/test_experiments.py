import math

import pytest

from foel_verify.config import DEFAULT_DELTA_GRID, Limits
from foel_verify.errors import InvalidInputError, PipelineMismatchError, SizeLimitError
from foel_verify.experiments import (
    EnergyEntry,
    EnergyTable,
    check_foel,
    check_gap_formula,
    check_kn_inequality,
    check_volume_monotonicity,
    energy_table,
    foel_summary,
    gap_formula,
    lower_hull,
    ordering_level,
    tables,
)
from foel_verify.experiments.tables import grid


def fake_table(rows: dict[int, list[float]], delta: float = 1.0) -> EnergyTable:
    """Таблица из готовых значений, без диагонализации."""
    entries = {
        (L, n): EnergyEntry(value, 1, "diagram-basis")
        for L, row in rows.items()
        for n, value in enumerate(row)
    }
    return EnergyTable(delta, max(rows), None, entries)


@pytest.fixture(scope="module")
def isotropic_table() -> EnergyTable:
    return energy_table(7, 1.0)


def test_grid_respects_n_max():
    assert grid(4) == [(2, 0), (2, 1), (3, 0), (3, 1), (4, 0), (4, 1), (4, 2)]
    assert grid(5, n_max=1)[-2:] == [(5, 0), (5, 1)]


def test_table_known_values(isotropic_table):
    assert isotropic_table.complete
    assert isotropic_table.energy(2, 1) == pytest.approx(1.0)
    assert isotropic_table.energy(3, 1) == pytest.approx(0.5)
    assert isotropic_table.energy(4, 1) == pytest.approx(1 - math.cos(math.pi / 4))
    assert isotropic_table.energy(4, 2) == pytest.approx((3 - math.sqrt(3)) / 2)
    for L in isotropic_table.lengths():
        assert isotropic_table.energy(L, 0) == pytest.approx(0.0, abs=1e-10)


def test_table_rows_in_order(isotropic_table):
    labels = [(L, n) for L, n, _, _ in isotropic_table.rows()]
    assert labels == sorted(labels)
    assert isotropic_table.row(6) == [isotropic_table.energy(6, n) for n in range(4)]


def test_foel_holds_on_chains(isotropic_table):
    reports = check_foel(isotropic_table)
    assert all(r.ordered for r in reports)
    by_length = {r.L: r for r in reports}
    assert by_length[2].margins == pytest.approx([1.0])
    assert by_length[4].margins == pytest.approx([0.2928932188, 0.3410813774], abs=1e-9)
    assert by_length[6].level == 3
    assert by_length[6].strict_level == 2


@pytest.mark.parametrize("delta", [1.25, 2.0, 5.0])
def test_foel_holds_anisotropic(delta):
    reports = check_foel(energy_table(6, delta))
    summary = foel_summary(reports)
    assert summary.verdict
    assert summary.smallest_margin > 0.0
    document = summary.to_json()
    assert document["name"] == "foel"
    assert len(document["levels"]) == 5


def test_foel_detects_swapped_levels():
    table = fake_table({2: [0.0, 1.0], 3: [0.0, 0.5], 4: [0.0, 0.6, 0.3]})
    reports = check_foel(table)
    bad = [r for r in reports if not r.ordered]
    assert [r.L for r in bad] == [4]
    assert bad[0].violations == [{"L": 4, "n": 1, "margin": pytest.approx(-0.3)}]
    assert not foel_summary(reports).verdict


def test_lower_hull_and_ordering_level():
    table = fake_table({4: [0.0, 0.5, 0.3]})
    assert lower_hull(table, 4) == [0.0, 0.3, 0.3]
    assert ordering_level(table, 4) == (0, 0)
    flat = fake_table({4: [0.0, 0.0, 0.3]})
    assert ordering_level(flat, 4) == (2, -1)


def test_volume_monotonicity(isotropic_table):
    report = check_volume_monotonicity(isotropic_table)
    assert report.verdict
    assert all(m["margin"] > 0 for m in report.margins)


def test_volume_monotonicity_detects_growth():
    table = fake_table({2: [0.0, 0.5], 3: [0.1, 0.7]})
    report = check_volume_monotonicity(table)
    assert not report.verdict
    assert {"L": 3, "n": 0, "energy": 0.1} in report.violations
    assert report.violations[0]["margin"] == pytest.approx(-0.2)


def test_kn_inequality(isotropic_table):
    report = check_kn_inequality(isotropic_table)
    assert report.verdict
    boundary = [m for m in report.margins if m["boundary"]]
    assert {(m["L"], m["n"]) for m in boundary} == {(4, 2), (6, 3)}


def test_kn_inequality_violation():
    table = fake_table({2: [0.0, 1.0], 3: [0.0, 0.5]}, delta=2.0)
    table.entries[(3, 1)] = EnergyEntry(-0.5, 2, "diagram-basis")
    report = check_kn_inequality(table)
    assert not report.verdict
    assert report.payload == {"delta": 2.0}


@pytest.mark.parametrize("delta", [1.0, 1.5, 3.0])
def test_gap_formula(delta):
    report = check_gap_formula(9, delta)
    assert report.verdict
    assert report.payload["max_deviation"] < 1e-10
    assert [m["L"] for m in report.margins] == list(range(2, 10))
    assert gap_formula(4, 1.0) == pytest.approx(1 - math.cos(math.pi / 4))


def test_both_method_agrees():
    table = energy_table(6, 1.5, method="both")
    assert {e.method for e in table.entries.values()} == {"both"}
    diagram = energy_table(6, 1.5)
    for cell, entry in table.entries.items():
        assert entry.energy == pytest.approx(diagram.entries[cell].energy, abs=1e-9)


def test_both_method_reports_mismatch(monkeypatch):
    monkeypatch.setattr(tables, "sector_energy_oracle", lambda *args, **kwargs: 42.0)
    with pytest.raises(PipelineMismatchError) as info:
        energy_table(3, 1.0, method="both", threads=1)
    assert info.value.context["L"] == 2
    assert info.value.context["n"] == 0
    assert info.value.context["delta"] == 1.0


def test_oracle_method_matches_diagram():
    oracle = energy_table(5, 2.0, method="oracle")
    diagram = energy_table(5, 2.0)
    for cell, entry in oracle.entries.items():
        assert entry.method == "oracle"
        assert entry.energy == pytest.approx(diagram.energy(*cell), abs=1e-9)


def test_energy_table_rejects_bad_arguments():
    with pytest.raises(InvalidInputError):
        energy_table(4, 1.0, method="guess")  # type: ignore[arg-type]
    with pytest.raises(InvalidInputError):
        energy_table(1, 1.0)
    with pytest.raises(SizeLimitError):
        energy_table(6, 1.0, method="oracle", limits=Limits(oracle_max_L=5))


def test_long_chains_with_few_arcs():
    table = energy_table(12, 1.0, n_max=2)
    assert table.complete
    assert not table.has(12, 3)
    assert table.energy(12, 1) == pytest.approx(1 - math.cos(math.pi / 12), abs=1e-10)
    assert all(r.ordered for r in check_foel(table))


def test_complete_follows_the_default_cap():
    assert grid(12, limits=Limits())[-5:] == [(12, 0), (12, 1), (12, 2), (12, 3), (12, 4)]
    assert (10, 5) in grid(12, limits=Limits())
    table = fake_table({2: [0.0, 1.0], 3: [0.0, 0.5]})
    assert table.complete
    del table.entries[(3, 1)]
    assert not table.complete


@pytest.fixture(scope="module", params=DEFAULT_DELTA_GRID, ids=lambda d: f"delta={d}")
def long_table(request) -> EnergyTable:
    return energy_table(14, request.param)


def test_long_table_covers_capped_grid(long_table):
    assert long_table.complete
    assert long_table.has(10, 5)
    assert long_table.has(14, 4)
    assert not long_table.has(11, 5)
    assert not long_table.has(14, 5)
    assert all(entry.method == "diagram-basis" for entry in long_table.entries.values())


def test_long_table_satisfies_checks(long_table):
    reports = check_foel(long_table)
    assert [r.L for r in reports] == list(range(2, 15))
    assert all(r.ordered for r in reports)
    assert check_volume_monotonicity(long_table).verdict
    assert check_kn_inequality(long_table).verdict


@pytest.mark.parametrize("delta", [1.0, 1.5, 3.0])
def test_both_method_agrees_up_to_oracle_limit(delta):
    table = energy_table(10, delta, method="both")
    assert table.complete
    assert table.has(10, 5)
    assert {e.method for e in table.entries.values()} == {"both"}
