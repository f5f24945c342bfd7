import argparse
import logging
import sys
from typing import Optional, Sequence

import pipeline
import settings
from errors import ConsistencyError, UsageError
from segments import Multisegment

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)

EXIT_PASS = 0
EXIT_THEOREM_FAILURE = 1
EXIT_USAGE = 2
EXIT_CONSISTENCY = 3


def parse_window(text: str) -> tuple[int, int]:
    """"a:b" -> (a, b)."""
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like 'a:b', got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hecke-ktypes",
        description="K-type multiplicities of Langlands quotients of affine Hecke algebra modules.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", help="deformation parameter, a rational such as 3 or 5/2 (default: HECKE_Q or 3)")
    common.add_argument("--format", choices=pipeline.FORMATS, default="text")
    common.add_argument("--output", default="-", help="output file, '-' for stdout")

    sub = parser.add_subparsers(dest="command", required=True)

    table = sub.add_parser("table", parents=[common], help="multiplicity table of one multisegment")
    table.add_argument("--n", type=int, help="rank; must match the multisegment's total size")
    table.add_argument("--segments", help='multisegment such as "[0,0];[2,2];[4,4]" or "[0,1];[0]@1"')
    table.add_argument("--example", choices=["gl3"], help="a built-in example instead of --segments")
    table.add_argument("--standard", action="store_true", help="tabulate the whole standard module, not its quotient")
    table.add_argument("--lines", action="store_true", help="check the product structure over cuspidal lines")

    certify = sub.add_parser("certify", parents=[common], help="certificate for one multisegment")
    certify.add_argument("--n", type=int)
    certify.add_argument("--segments", required=True)

    sweep = sub.add_parser("sweep", parents=[common], help="certify every multisegment of size n")
    sweep.add_argument("--n", type=int, required=True)
    sweep.add_argument("--window", type=parse_window, help="a:b, both segment ends in [a, b] (default 0:n)")
    sweep.add_argument("--jobs", type=int, help="worker processes (default: HECKE_JOBS or 1)")
    sweep.add_argument("--allow-n5", action="store_true", help="raise the size cap to the opt-in limit")

    sub.add_parser("selftest", parents=[common], help="relation and property suites")
    return parser


def _multisegment(args) -> Multisegment:
    if not args.segments:
        raise UsageError("--segments is required")
    m = Multisegment.parse(args.segments)
    if args.n is not None and args.n != m.total:
        raise UsageError(f"--n {args.n} does not match the multisegment's total size {m.total}")
    return m


def run_command(args) -> int:
    if args.command == "table":
        if args.example == "gl3":
            result = pipeline.gl3_counterexample(args.q)
        elif args.lines:
            result = pipeline.line_product_check(_multisegment(args), args.q)
        elif args.standard:
            result = pipeline.standard_table(_multisegment(args), args.q)
        else:
            result = pipeline.ktype_table(_multisegment(args), args.q)
    elif args.command == "certify":
        result = pipeline.certify(_multisegment(args), args.q)
    elif args.command == "sweep":
        if args.jobs is not None and args.jobs < 1:
            raise UsageError(f"--jobs must be at least 1, got {args.jobs}")
        result = pipeline.sweep(
            args.n,
            args.window,
            args.q,
            args.jobs,
            allow_opt_in=args.allow_n5,
            install_signal_handlers=True,
        )
    else:
        result = pipeline.run_selftest(args.q)
        pipeline.emit(result, args.format, args.output)
        return EXIT_PASS if result.passed else EXIT_CONSISTENCY

    pipeline.emit(result, args.format, args.output)
    return EXIT_PASS if result.verdict == pipeline.PASS else EXIT_THEOREM_FAILURE


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings.validate_environment_variables()
        return run_command(args)
    except ConsistencyError as e:
        logger.critical(f"Internal consistency failure: {e}")
        return EXIT_CONSISTENCY
    except (UsageError, ValueError) as e:
        logger.error(f"{e}")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
