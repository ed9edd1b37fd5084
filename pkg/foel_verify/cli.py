"""
Command-line front end.

    foel scan --L-max 8 --delta 1.0 --method both --format csv
    foel gap --L 4 --delta 1.0
    foel sector --L 6 --n 2 --dump-matrix
    foel tree --edges star3.json
    foel diagrams --L 6 --n 2
    foel lieb-mattis --chain af --sites 6

Exit codes: 0 every verdict holds, 1 a violation (a pipeline mismatch included),
2 invalid input, 3 a solver that did not converge.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import __version__
from .config import DEFAULT_DELTA_GRID, LIMITS, TOLERANCES, Tolerances, defaults_dict
from .errors import ComplexSpectrumError, ConvergenceError, FoelError, InvalidInputError
from .experiments import (
    antiferromagnetic_chain,
    check_foel,
    check_gap_formula,
    check_kn_inequality,
    check_volume_monotonicity,
    energy_table,
    enumerate_trees,
    ferromagnetic_chain,
    foel_summary,
    gap_formula,
    lieb_mattis_scan,
    model_from_document,
    solvable_cross_model,
    tree_foel_level1,
)
from .experiments.tables import diagram_energy
from .hilbert import AnisotropyParam, build_sector_hamiltonian
from .lattice import tree_from_document
from .reports import Report, combine
from .stats import GLOBAL_STATS, StreamReporter
from .tl_diagrams import enumerate_diagrams, format_diagram, sector_matrix
from .tools import atomic_write, check_output_path, format_energy, matrix_to_csv, table_to_csv
from .tools.serialization import lines

logger = logging.getLogger("foel_verify")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2
EXIT_NONCONVERGENCE = 3


class Outcome:
    """Text to emit plus the verdicts it carries."""

    def __init__(self, text: str, reports: Sequence[Report] = ()) -> None:
        self.text = text
        self.reports = list(reports)

    @property
    def verdict(self) -> bool:
        return all(r.verdict for r in self.reports)


def _deltas(args: argparse.Namespace) -> list[float]:
    return list(args.delta) if args.delta else list(DEFAULT_DELTA_GRID)


def _tolerances(args: argparse.Namespace) -> Tolerances:
    return TOLERANCES.with_strictness(args.strictness)


def _read_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise InvalidInputError(f"Cannot read `{path}`: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"`{path}` is not valid JSON: {e}") from None


def _report_text(report: Report, fmt: str) -> str:
    if fmt == "json":
        return report.dumps()
    margin = report.smallest_margin
    shown = "n/a" if margin is None else format_energy(margin)
    return f"{report.name},{str(report.verdict).lower()},{shown},{len(report.violations)}\n"


def cmd_scan(args: argparse.Namespace) -> Outcome:
    tolerances = _tolerances(args)
    tables = []
    reports = []
    for delta in _deltas(args):
        table = energy_table(
            args.L_max, delta, args.method, n_max=args.n_max, tolerances=tolerances
        )
        tables.append(table)
        reports.append(
            combine(
                f"scan-{table.delta!r}",
                [
                    foel_summary(check_foel(table, tolerances.strictness), tolerances.strictness),
                    check_volume_monotonicity(table, tolerances.strictness),
                    check_kn_inequality(table, tolerances.kn_inequality),
                ],
            )
        )
    if args.format == "csv":
        return Outcome(table_to_csv(tables), reports)

    report = combine("scan", reports)
    report.payload["energies"] = [
        {
            "L": L,
            "n": n,
            "delta": delta,
            "energy": e.energy,
            "dim": e.dimension,
            "method": e.method,
        }
        for table in tables
        for L, n, delta, e in table.rows()
    ]
    return Outcome(report.dumps(), reports)


def cmd_gap(args: argparse.Namespace) -> Outcome:
    tolerances = _tolerances(args)
    if args.L is not None:
        values = []
        for delta in args.delta or [1.0]:
            aniso = AnisotropyParam.from_delta(delta)
            values.append(format_energy(diagram_energy(args.L, 1, aniso, tolerances=tolerances)))
            logger.debug("Closed form at L=%d: %r", args.L, gap_formula(args.L, aniso.delta))
        return Outcome(lines(values))

    reports = [
        check_gap_formula(args.L_max, delta, tolerances.gap_formula, tolerances)
        for delta in _deltas(args)
    ]
    report = combine("gap-formula", reports)
    return Outcome(_report_text(report, args.format), reports)


def cmd_sector(args: argparse.Namespace) -> Outcome:
    aniso = AnisotropyParam.from_delta(args.delta[0] if args.delta else 1.0)
    if args.dump_hamiltonian:
        ham = build_sector_hamiltonian(args.L, args.L / 2 - args.n, aniso)
        return Outcome(ham.to_triplet_text())
    A = sector_matrix(args.L, args.n, aniso)
    if args.dump_matrix:
        return Outcome(matrix_to_csv(A.entries))
    energy = diagram_energy(args.L, args.n, aniso, tolerances=_tolerances(args))
    if args.format == "json":
        document = {
            "L": args.L,
            "n": args.n,
            "delta": aniso.delta,
            "dim": A.dimension,
            "energy": energy,
        }
        return Outcome(json.dumps(document, indent=2, sort_keys=True) + "\n")
    return Outcome(f"{args.L},{args.n},{aniso.delta!r},{format_energy(energy)},{A.dimension}\n")


def cmd_tree(args: argparse.Namespace) -> Outcome:
    tolerances = _tolerances(args)
    if args.edges:
        trees = [tree_from_document(_read_json(args.edges))]
    else:
        trees = enumerate_trees(args.all)
    reports = [tree_foel_level1(tree, tolerances) for tree in trees]
    report = reports[0] if len(reports) == 1 else combine("tree-level1", reports)
    return Outcome(_report_text(report, args.format), reports)


def cmd_diagrams(args: argparse.Namespace) -> Outcome:
    return Outcome(lines([format_diagram(d) for d in enumerate_diagrams(args.L, args.n)]))


def cmd_lieb_mattis(args: argparse.Namespace) -> Outcome:
    if args.model:
        model = model_from_document(_read_json(args.model))
    elif args.cross:
        model = solvable_cross_model(*args.cross)
    elif args.chain == "fm":
        model = ferromagnetic_chain(args.sites)
    else:
        model = antiferromagnetic_chain(args.sites)
    report = lieb_mattis_scan(model, _tolerances(args))
    return Outcome(_report_text(report, args.format), [report])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foel",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--defaults", action="store_true", help="print every default as JSON and exit"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--delta",
        type=float,
        action="append",
        help=f"anisotropy, may be repeated (default grid: {list(DEFAULT_DELTA_GRID)})",
    )
    common.add_argument(
        "--format",
        choices=("csv", "json"),
        default=None,
        help="output format (default: json for tree, csv otherwise)",
    )
    common.add_argument("--output", type=Path, help="write here atomically instead of stdout")
    common.add_argument(
        "--strictness",
        type=float,
        default=None,
        help=f"smallest margin counted as strict (default: {TOLERANCES.strictness})",
    )

    sub = parser.add_subparsers(dest="command")

    scan = sub.add_parser("scan", parents=[common], help="energy table and ordering checks")
    scan.add_argument("--L-max", dest="L_max", type=int, default=8)
    scan.add_argument(
        "--n-max",
        dest="n_max",
        type=int,
        default=None,
        help=f"largest arc count (default: every n up to L = {LIMITS.oracle_max_L}, "
        f"then n <= {LIMITS.diagram_max_n})",
    )
    scan.add_argument("--method", choices=("diagram", "oracle", "both"), default="diagram")
    scan.set_defaults(handler=cmd_scan)

    gap = sub.add_parser(
        "gap", parents=[common], help="one-magnon gap against 1 - cos(pi/L)/delta"
    )
    group = gap.add_mutually_exclusive_group(required=True)
    group.add_argument("--L", type=int, help="print the gap of one chain length")
    group.add_argument("--L-max", dest="L_max", type=int, help="check L = 2..L_max")
    gap.set_defaults(handler=cmd_gap)

    sector = sub.add_parser("sector", parents=[common], help="one (L, n) sector")
    sector.add_argument("--L", type=int, required=True)
    sector.add_argument("--n", type=int, required=True)
    sector.add_argument("--dump-matrix", action="store_true", help="A_{L,n} as CSV")
    sector.add_argument(
        "--dump-hamiltonian",
        action="store_true",
        help="H on the magnetization L/2 - n states as `row col value` triplets",
    )
    sector.set_defaults(handler=cmd_sector)

    tree = sub.add_parser("tree", parents=[common], help="isotropic ferromagnet on trees")
    source = tree.add_mutually_exclusive_group(required=True)
    source.add_argument("--edges", help='JSON file {"vertices": L, "edges": [[u, v], ...]}')
    source.add_argument("--all", type=int, metavar="L", help="every tree on at most L vertices")
    tree.set_defaults(handler=cmd_tree)

    diagrams = sub.add_parser("diagrams", parents=[common], help="list noncrossing diagrams")
    diagrams.add_argument("--L", type=int, required=True)
    diagrams.add_argument("--n", type=int, required=True)
    diagrams.set_defaults(handler=cmd_diagrams)

    lm = sub.add_parser("lieb-mattis", parents=[common], help="bipartite spin ordering scan")
    model = lm.add_mutually_exclusive_group(required=True)
    model.add_argument("--model", help="JSON model file")
    model.add_argument("--chain", choices=("af", "fm"), help="nearest-neighbour chain")
    model.add_argument(
        "--cross", type=int, nargs=2, metavar=("A", "B"), help="J = 1 between every A-B pair"
    )
    lm.add_argument("--sites", type=int, default=6)
    lm.set_defaults(handler=cmd_lieb_mattis)

    return parser


def _configure_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    logger.propagate = False


def exit_code(error: FoelError) -> int:
    if isinstance(error, InvalidInputError):
        return EXIT_INVALID
    if isinstance(error, (ConvergenceError, ComplexSpectrumError)):
        return EXIT_NONCONVERGENCE
    # несогласованность конвейеров и нарушение симметрии считаются нарушениями
    return EXIT_VIOLATION


def run(args: argparse.Namespace) -> int:
    """Runs one parsed command and returns its exit code."""
    if args.defaults:
        sys.stdout.write(json.dumps(defaults_dict(), indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    if args.format is None:
        args.format = "json" if args.command == "tree" else "csv"

    try:
        if args.output is not None:
            # проверяем путь до долгих вычислений
            check_output_path(args.output)
        outcome: Outcome = args.handler(args)
        if args.output is not None:
            atomic_write(args.output, outcome.text)
        else:
            sys.stdout.write(outcome.text)
    except FoelError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return exit_code(e)
    except OSError as e:
        logger.error("Cannot write output: %s", e)
        return EXIT_INVALID

    for report in outcome.reports:
        if report.verdict:
            GLOBAL_STATS.add_verified(report.name, report.smallest_margin)
        else:
            GLOBAL_STATS.add_violated(
                report.name, "\n".join(json.dumps(v, sort_keys=True) for v in report.violations)
            )
    if args.output is not None:
        GLOBAL_STATS.add_saved(str(args.output))
    if GLOBAL_STATS.has_violations() or args.verbose:
        GLOBAL_STATS.print_summary(StreamReporter(sys.stderr))
    return EXIT_OK if outcome.verdict else EXIT_VIOLATION


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    if not args.defaults and args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INVALID
    GLOBAL_STATS.reset()
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
