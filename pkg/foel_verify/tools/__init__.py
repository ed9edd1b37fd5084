from .serialization import (
    CSV_HEADER,
    atomic_write,
    check_output_path,
    format_energy,
    matrix_to_csv,
    parse_matrix_csv,
    table_to_csv,
)

__all__ = [
    "CSV_HEADER",
    "atomic_write",
    "check_output_path",
    "format_energy",
    "matrix_to_csv",
    "parse_matrix_csv",
    "table_to_csv",
]
