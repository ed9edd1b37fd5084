import os
from pathlib import Path

import numpy as np
import pytest

from foel_verify.errors import InvalidInputError
from foel_verify.experiments import EnergyEntry, EnergyTable
from foel_verify.tools import (
    CSV_HEADER,
    atomic_write,
    check_output_path,
    format_energy,
    matrix_to_csv,
    parse_matrix_csv,
    table_to_csv,
)
from foel_verify.tools.serialization import lines

# ------------------------------ текстовые формы ------------------------------


@pytest.mark.parametrize(
    "value, text",
    [
        (0.2928932188134524, "0.292893218813"),
        (0.1 + 0.2, "0.3"),
        (1.0, "1"),
        (-1e-20, "-1e-20"),
    ],
)
def test_format_energy(value, text):
    assert format_energy(value) == text


def test_table_to_csv():
    table = EnergyTable(
        1.5,
        3,
        entries={
            (3, 1): EnergyEntry(0.5, 2, "oracle"),
            (2, 0): EnergyEntry(0.0, 1, "diagram-basis"),
        },
    )
    rows = table_to_csv([table]).splitlines()
    assert rows == [CSV_HEADER, "2,0,1.5,0,1,diagram-basis", "3,1,1.5,0.5,2,oracle"]


def test_matrix_csv_keeps_every_digit():
    A = np.array([[2.0, -1.0 / 3.0], [-1.0 / 6.0, 1.0]])
    text = matrix_to_csv(A)
    assert text.splitlines()[0] == "2.0,-0.3333333333333333"
    assert np.array_equal(parse_matrix_csv(text), A)


@pytest.mark.parametrize("text", ["1,2\n3\n", "1,x\n"])
def test_parse_matrix_csv_rejects(text):
    with pytest.raises(InvalidInputError):
        parse_matrix_csv(text)


def test_lines():
    assert lines(["(1,2)", "(2,3)"]) == "(1,2)\n(2,3)\n"
    assert lines([]) == ""


# ------------------------------ вывод в файл ------------------------------


def test_check_output_path(tmp_path: Path):
    assert check_output_path(tmp_path / "ok.csv") == tmp_path / "ok.csv"
    with pytest.raises(InvalidInputError):
        check_output_path(tmp_path / "missing" / "ok.csv")
    with pytest.raises(InvalidInputError):
        check_output_path(tmp_path / "bad\0name.csv")


def test_atomic_write_replaces_file(tmp_path: Path):
    target = tmp_path / "out.csv"
    target.write_text("old\n")
    atomic_write(target, "new\n")
    assert target.read_text() == "new\n"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["out.csv"]


def test_atomic_write_cleans_up_on_failure(tmp_path: Path, monkeypatch):
    """Если переименование не удалось, старый файл цел, а временный удалён."""
    target = tmp_path / "out.csv"
    target.write_text("old\n")

    def broken_replace(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", broken_replace)
    with pytest.raises(OSError):
        atomic_write(target, "new\n")
    assert target.read_text() == "old\n"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["out.csv"]
