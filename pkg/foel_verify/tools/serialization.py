"""
Text forms of energies, tables and matrices, and atomic file output.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np
import pathvalidate

from ..errors import InvalidInputError

if TYPE_CHECKING:
    from ..experiments.tables import EnergyTable

CSV_HEADER = "L,n,delta,energy,dim,method"


def format_energy(value: float) -> str:
    """12 significant digits."""
    return f"{value:.12g}"


def table_to_csv(tables: Iterable["EnergyTable"]) -> str:
    lines = [CSV_HEADER]
    for table in tables:
        for L, n, delta, entry in table.rows():
            lines.append(
                f"{L},{n},{delta!r},{format_energy(entry.energy)},{entry.dimension},{entry.method}"
            )
    return "\n".join(lines) + "\n"


def matrix_to_csv(matrix: np.ndarray) -> str:
    """Dense CSV with ``repr`` floats, so that re-parsing gives the same doubles."""
    rows = np.atleast_2d(np.asarray(matrix, dtype=float))
    return "".join(",".join(repr(float(x)) for x in row) + "\n" for row in rows)


def parse_matrix_csv(text: str) -> np.ndarray:
    rows = [line.split(",") for line in text.splitlines() if line.strip()]
    try:
        values = [[float(x) for x in row] for row in rows]
    except ValueError as e:
        raise InvalidInputError(f"Bad matrix CSV: {e}") from None
    if len({len(r) for r in values}) > 1:
        raise InvalidInputError("Bad matrix CSV: ragged rows")
    return np.array(values, dtype=float)


def lines(items: Sequence[str]) -> str:
    return "".join(f"{item}\n" for item in items)


def check_output_path(path: Path) -> Path:
    """
    The file name must be valid on this platform and its directory must exist.

    Raises:
        InvalidInputError
    """
    try:
        # auto подберёт правила под текущую ОС
        pathvalidate.validate_filename(path.name, platform="auto")
    except pathvalidate.ValidationError as e:
        raise InvalidInputError(f"Invalid output name `{path.name}`: {e}") from None
    if not path.parent.is_dir():
        raise InvalidInputError(f"Output directory `{path.parent}` does not exist")
    return path


def atomic_write(path: Path, text: str) -> None:
    """Write to a temporary file next to ``path`` and rename it into place."""
    path = check_output_path(Path(path))
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
