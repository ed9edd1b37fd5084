import json

import numpy as np
import pytest

from foel_verify import cli
from foel_verify.errors import (
    ComplexSpectrumError,
    ConvergenceError,
    PipelineMismatchError,
    SectorError,
    SymmetryViolationError,
)
from foel_verify.reports import Report
from foel_verify.stats import GLOBAL_STATS
from foel_verify.tools import CSV_HEADER, parse_matrix_csv

STAR = {"vertices": 4, "edges": [[0, 1], [0, 2], [0, 3]]}

pytestmark = pytest.mark.usefixtures("keep_global_stats")


def test_gap_of_one_length(capsys):
    assert cli.main(["gap", "--L", "4", "--delta", "1.0"]) == cli.EXIT_OK
    assert capsys.readouterr().out == "0.292893218813\n"


def test_gap_for_several_deltas(capsys):
    assert cli.main(["gap", "--L", "3", "--delta", "1.0", "--delta", "2.0"]) == 0
    assert capsys.readouterr().out.splitlines() == ["0.5", "0.75"]


def test_gap_formula_check(capsys):
    assert cli.main(["gap", "--L-max", "7", "--delta", "1.5"]) == 0
    assert capsys.readouterr().out == "gap-formula,true,n/a,0\n"


def test_scan_csv(capsys):
    assert cli.main(["scan", "--L-max", "4", "--delta", "1.0"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == CSV_HEADER
    assert len(rows) == 1 + 7
    assert "4,1,1.0,0.292893218813,3,diagram-basis" in rows


def test_scan_json(capsys):
    assert cli.main(["scan", "--L-max", "5", "--delta", "2.0", "--format", "json"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["name"] == "scan"
    assert document["verdict"] is True
    assert document["parts"] == ["scan-2.0"]
    assert len(document["energies"]) == 10
    assert set(document["versions"]) == {"foel-verify", "numpy", "scipy"}


def test_scan_caps_arcs_past_oracle_range(capsys):
    assert cli.main(["scan", "--L-max", "12", "--delta", "1.0"]) == 0
    rows = capsys.readouterr().out.splitlines()
    labels = {tuple(row.split(",")[:2]) for row in rows[1:]}
    assert ("10", "5") in labels
    assert ("11", "4") in labels
    assert ("12", "4") in labels
    assert ("11", "5") not in labels
    assert ("12", "5") not in labels


def test_scan_records_verified_claims(capsys):
    cli.main(["scan", "--L-max", "3", "--delta", "1.0", "--delta", "3.0"])
    assert GLOBAL_STATS.verified == ["scan-1.0", "scan-3.0"]
    assert not GLOBAL_STATS.has_violations()


def test_defaults(capsys):
    assert cli.main(["--defaults"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["delta_grid"] == [1.0, 1.25, 1.5, 2.0, 3.0, 5.0]
    assert document["tolerances"]["strictness"] == 1e-8
    assert document["threads_env"] == "THREADS"


def test_diagrams(capsys):
    assert cli.main(["diagrams", "--L", "4", "--n", "2"]) == 0
    assert capsys.readouterr().out == "(1,2)(3,4)\n(1,4)(2,3)\n"


def test_sector_dump_matrix(capsys):
    assert cli.main(["sector", "--L", "4", "--n", "2", "--delta", "2.0", "--dump-matrix"]) == 0
    A = parse_matrix_csv(capsys.readouterr().out)
    assert np.array_equal(A, [[2.0, -0.5], [-0.25, 1.0]])


def test_sector_dump_hamiltonian(capsys):
    assert cli.main(["sector", "--L", "2", "--n", "1", "--dump-hamiltonian"]) == 0
    triplets = [line.split() for line in capsys.readouterr().out.splitlines()]
    assert {(int(r), int(c)) for r, c, _ in triplets} == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert sum(float(v) for r, c, v in triplets if r == c) == pytest.approx(1.0)


def test_sector_energy_json(capsys):
    assert cli.main(["sector", "--L", "4", "--n", "1", "--format", "json"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["dim"] == 3
    assert document["energy"] == pytest.approx(1 - np.cos(np.pi / 4))


def test_tree_from_file(tmp_path, capsys):
    path = tmp_path / "star.json"
    path.write_text(json.dumps(STAR), encoding="utf-8")
    assert cli.main(["tree", "--edges", str(path)]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["name"] == "tree-level1"
    assert document["verdict"] is True


def test_tree_as_csv(tmp_path, capsys):
    path = tmp_path / "star.json"
    path.write_text(json.dumps(STAR), encoding="utf-8")
    assert cli.main(["tree", "--edges", str(path), "--format", "csv"]) == 0
    assert capsys.readouterr().out == "tree-level1,true,1,0\n"


def test_all_trees(capsys):
    assert cli.main(["tree", "--all", "5", "--format", "json"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["verdict"] is True
    assert len(document["parts"]) == 7


def test_lieb_mattis_cross(capsys):
    assert cli.main(["lieb-mattis", "--cross", "2", "1", "--format", "json"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["ground_spin"] == 0.5
    assert document["script_s"] == 0.5


def test_lieb_mattis_chain(capsys):
    assert cli.main(["lieb-mattis", "--chain", "fm", "--sites", "4"]) == 0
    assert capsys.readouterr().out.startswith("lieb-mattis,true,")


def test_output_file(tmp_path, capsys):
    target = tmp_path / "table.csv"
    assert cli.main(["scan", "--L-max", "3", "--delta", "1.0", "--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text(encoding="utf-8").startswith(CSV_HEADER + "\n")
    assert GLOBAL_STATS.saved == [str(target)]
    # временный файл не остаётся рядом
    assert [p.name for p in tmp_path.iterdir()] == ["table.csv"]


def test_output_directory_must_exist(tmp_path, capsys):
    target = tmp_path / "missing" / "table.csv"
    assert cli.main(["diagrams", "--L", "4", "--n", "1", "--output", str(target)]) == 2
    assert "does not exist" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["gap", "--L", "4", "--delta", "0.5"],
        ["sector", "--L", "3", "--n", "2"],
        ["tree", "--edges", "/nonexistent/tree.json"],
        ["diagrams", "--L", "4", "--n", "3"],
    ],
)
def test_invalid_input_exit_code(argv, capsys):
    assert cli.main(argv) == cli.EXIT_INVALID
    assert "ERROR foel_verify" in capsys.readouterr().err


def test_bad_tree_document(tmp_path, capsys):
    path = tmp_path / "cycle.json"
    path.write_text(json.dumps({"vertices": 3, "edges": [[0, 1], [1, 2], [2, 0]]}))
    assert cli.main(["tree", "--edges", str(path)]) == 2
    assert "CycleError" in capsys.readouterr().err


def test_no_command(capsys):
    assert cli.main([]) == 2
    assert "usage: foel" in capsys.readouterr().err


def test_argparse_errors_exit_with_two(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["scan", "--method", "guess"])
    assert info.value.code == 2


def test_violation_exit_code(monkeypatch, tmp_path, capsys):
    """Нарушенный вердикт даёт код 1 и сводку в stderr."""
    bad = Report("tree-level1", False, [{"n": 2, "margin": -0.1}], [{"n": 2, "margin": -0.1}])
    monkeypatch.setattr(cli, "tree_foel_level1", lambda tree, tolerances: bad)
    path = tmp_path / "star.json"
    path.write_text(json.dumps(STAR))
    assert cli.main(["tree", "--edges", str(path), "--format", "csv"]) == cli.EXIT_VIOLATION
    captured = capsys.readouterr()
    assert captured.out == "tree-level1,false,-0.1,1\n"
    assert "FOEL Verification Summary" in captured.err
    assert '{"margin": -0.1, "n": 2}' in captured.err


@pytest.mark.parametrize(
    "error, code",
    [
        (SectorError("bad"), 2),
        (ConvergenceError("slow", residual=1e-3, iterations=10), 3),
        (ComplexSpectrumError("imag"), 3),
        (PipelineMismatchError("differ"), 1),
        (SymmetryViolationError("leak"), 1),
    ],
)
def test_exit_code_mapping(error, code):
    assert cli.exit_code(error) == code
