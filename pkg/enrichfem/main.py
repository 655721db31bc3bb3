import argparse
import logging
import sys
from pathlib import Path
from typing import NoReturn, Optional, Sequence

from enrichfem import __version__
from enrichfem.api.dependencies import get_orchestrator
from enrichfem.core.config import settings
from enrichfem.core.exceptions import AppError, ConfigurationError, InputError, NumericalError
from enrichfem.core.logging import setup_logging
from enrichfem.services.parsers import parse_mesh_size, resolve_problem

logger = logging.getLogger("main")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise ConfigurationError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog=settings.APP_NAME,
        description="Convergence studies for enriched unfitted finite elements on 1D interface problems.",
    )
    parser.add_argument("--problem", required=True, help="Benchmark id 1..6 or path to a JSON problem file")
    parser.add_argument("--degree", type=int, choices=(1, 2), help="Polynomial degree (default: the problem's)")
    parser.add_argument("--h0", default=settings.DEFAULT_H0, help="Coarsest mesh size as a rational, e.g. 1/8")
    parser.add_argument("--levels", type=int, default=settings.DEFAULT_LEVELS, help="Number of refinement levels")
    parser.add_argument("--factor", type=int, default=settings.REFINEMENT_FACTOR, help="Refinement factor between levels")
    parser.add_argument("--cond", action="store_true", help="Compute 2-norm condition numbers")
    parser.add_argument("--quad", type=int, default=settings.DEFAULT_QUAD_POINTS, help="Gauss points per integration cell")
    parser.add_argument("--format", default=settings.DEFAULT_FORMAT, choices=("csv", "md", "markdown", "json"))
    parser.add_argument("--out", default="-", help="Output path, '-' for stdout")
    parser.add_argument("--compare", action="store_true", help="Add a deviation column against the stored reference rows (markdown)")
    parser.add_argument("--log-level", default=None, help="Logging level (default: settings.LOG_LEVEL)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def _write(report: str, out: str) -> None:
    if out in ("-", "stdout"):
        sys.stdout.write(report)
        return
    Path(out).write_text(report, encoding="utf-8")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    setup_logging(args.log_level)
    orchestrator = get_orchestrator()

    try:
        benchmark = resolve_problem(args.problem)
        table = orchestrator.run_convergence(
            benchmark,
            degree=args.degree,
            h0=parse_mesh_size(args.h0),
            levels=args.levels,
            with_cond=args.cond,
            quad_npts=args.quad,
            factor=args.factor,
        )
        report = orchestrator.emit_report(table, args.format, benchmark.reference if args.compare else None)
        _write(report, args.out)
    except NumericalError as e:
        logger.debug("Numerical failure", exc_info=True)
        print(f"numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InputError, ConfigurationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: cannot write {args.out}: {e.strerror}", file=sys.stderr)
        return EXIT_INPUT
    except AppError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
