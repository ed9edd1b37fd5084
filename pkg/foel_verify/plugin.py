from pathlib import Path
from typing import Dict, Generator

import pytest

from .config import DEFAULT_DELTA_GRID, TOLERANCES
from .core import FoelVerifier
from .stats import GLOBAL_STATS

# Global storage of FoelVerifier instances for different directories
_verifiers: Dict[Path, FoelVerifier] = {}


def pytest_addoption(parser: pytest.Parser) -> None:
    """Adds the --foel-* options to pytest."""
    parser.addoption(
        "--foel-l-max",
        action="store",
        type=int,
        default=None,
        help="Largest chain length of the energy tables (overrides `foel_l_max`)",
    )
    parser.addoption(
        "--foel-delta",
        action="append",
        type=float,
        default=None,
        help="Anisotropy to check; may be repeated (overrides `foel_delta_grid`)",
    )
    parser.addoption(
        "--foel-strictness",
        action="store",
        type=float,
        default=None,
        help="Smallest margin counted as a strict inequality",
    )
    parser.addoption(
        "--foel-save-reports",
        action="store_true",
        help="Write every checked claim as a JSON report next to the test module",
    )
    parser.addoption(
        "--foel-debug",
        action="store_true",
        help="Show internal exception stack (stops hiding them)",
    )

    parser.addini(
        "foel_l_max",
        default="8",
        help="Largest chain length of the energy tables (default: 8)",
    )
    parser.addini(
        "foel_delta_grid",
        default=" ".join(str(d) for d in DEFAULT_DELTA_GRID),
        help="Whitespace separated anisotropies (default: 1 1.25 1.5 2 3 5)",
    )
    parser.addini(
        "foel_strictness",
        default=str(TOLERANCES.strictness),
        help="Smallest margin counted as a strict inequality (default: 1e-8)",
    )
    parser.addini(
        "foel_reports_dir",
        default="__foel_reports__",
        help="Directory for saved reports (default: __foel_reports__)",
    )


def _settings(config: pytest.Config) -> tuple[int, tuple[float, ...], float]:
    l_max = config.getoption("--foel-l-max") or int(str(config.getini("foel_l_max")))
    deltas = config.getoption("--foel-delta") or [
        float(d) for d in str(config.getini("foel_delta_grid")).split()
    ]
    strictness = config.getoption("--foel-strictness")
    if strictness is None:
        strictness = float(str(config.getini("foel_strictness")))
    return int(l_max), tuple(deltas), float(strictness)


@pytest.fixture(scope="function")
def foel(request: pytest.FixtureRequest) -> Generator[FoelVerifier, None, None]:
    """
    Fixture providing the FoelVerifier of the test's directory.
    """

    # Получаем путь к тестовому файлу
    test_path = Path(request.node.path if hasattr(request.node, "path") else request.node.fspath)
    root_dir = test_path.parent

    if root_dir not in _verifiers:
        l_max, deltas, strictness = _settings(request.config)
        _verifiers[root_dir] = FoelVerifier(
            root_dir=root_dir,
            l_max=l_max,
            delta_grid=deltas,
            tolerances=TOLERANCES.with_strictness(strictness),
            save_reports=bool(request.config.getoption("--foel-save-reports")),
            debug_mode=bool(request.config.getoption("--foel-debug")),
            reports_dir_name=str(request.config.getini("foel_reports_dir")),
        )

    yield _verifiers[root_dir]


@pytest.hookimpl(trylast=True)
def pytest_unconfigure(config: pytest.Config) -> None:
    """
    Hook that runs after all tests have finished.
    Clears cached verifiers and statistics.
    """
    _verifiers.clear()
    GLOBAL_STATS.reset()


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter: pytest.TerminalReporter, exitstatus: int) -> None:
    """
    Adds the verified and violated claims to the final pytest report in the terminal.
    """
    GLOBAL_STATS.print_summary(terminalreporter)
