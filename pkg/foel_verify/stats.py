"""
Module for collecting and displaying verification statistics.
"""

import sys
from typing import Any, Dict, List, Optional, TextIO


class VerificationStats:
    """Collects verified and violated claims and the reports written to disk"""

    def __init__(self) -> None:
        self.verified: List[str] = []
        self.margins: Dict[str, Optional[float]] = {}  # claim -> smallest margin
        self.violated: List[str] = []
        self.details: Dict[str, str] = {}  # claim -> violations text
        self.saved: List[str] = []

    def reset(self) -> None:
        self.__init__()  # type: ignore[misc]

    def add_verified(self, name: str, margin: Optional[float] = None) -> None:
        self.verified.append(name)
        self.margins[name] = margin

    def add_violated(self, name: str, details: Optional[str] = None) -> None:
        self.violated.append(name)
        if details and details.strip():
            self.details[name] = details

    def add_saved(self, file_name: str) -> None:
        self.saved.append(file_name)

    def has_violations(self) -> bool:
        return bool(self.violated)

    def has_any_info(self) -> bool:
        return bool(self.verified or self.violated or self.saved)

    def __str__(self) -> str:
        parts = []
        if self.verified:
            parts.append(
                f"Verified claims ({len(self.verified)}): "
                + ", ".join(f"`{s}`" for s in self.verified)
            )
        if self.violated:
            parts.append(
                f"Violated claims ({len(self.violated)}): "
                + ", ".join(f"`{s}`" for s in self.violated)
            )
        if self.saved:
            parts.append(
                f"Saved reports ({len(self.saved)}): " + ", ".join(f"`{s}`" for s in self.saved)
            )
        return "\n".join(parts)

    def print_summary(self, terminalreporter: Any) -> None:
        """
        Prints the summary through anything with ``write_sep``/``write_line``:
        the pytest terminal reporter or a :class:`StreamReporter`.
        """
        if not self.has_any_info():
            return

        terminalreporter.write_sep("=", "FOEL Verification Summary")

        if self.verified:
            terminalreporter.write_line(f"Verified claims ({len(self.verified)}):", green=True)
            for name in self.verified:
                margin = self.margins.get(name)
                suffix = "" if margin is None else f" (smallest margin {margin:.3e})"
                terminalreporter.write_line(f"  - {name}{suffix}", green=True)

        if self.violated:
            terminalreporter.write_line(f"Violated claims ({len(self.violated)}):", red=True)
            for name in self.violated:
                terminalreporter.write_line(f"  - {name}", red=True)
                if name in self.details:
                    for line in self.details[name].split("\n"):
                        if line.strip():
                            terminalreporter.write_line(f"      {line}")
                    terminalreporter.write_line("")  # separation

        if self.saved:
            terminalreporter.write_line(f"Saved reports ({len(self.saved)}):", cyan=True)
            for name in self.saved:
                terminalreporter.write_line(f"  - {name}", cyan=True)


class StreamReporter:
    """Minimal stand-in for the terminal reporter, writing plain text to a stream."""

    def __init__(self, stream: TextIO = sys.stderr, width: int = 80) -> None:
        self.stream = stream
        self.width = width

    def write_sep(self, sep: str, title: str) -> None:
        side = max((self.width - len(title) - 2) // (2 * len(sep)), 1)
        self.stream.write(f"{sep * side} {title} {sep * side}\n")

    def write_line(self, line: str, **markup: bool) -> None:
        self.stream.write(line + "\n")


GLOBAL_STATS = VerificationStats()
