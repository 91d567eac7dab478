"""Command-line entry point: ``jcrevival --verb {calibrate,simulate,report,selftest}``."""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import ConvergenceError, InvalidInputError, NoRootError
from .report import calibrate_scenario, run_report, summary_lines
from .scenario import Scenario, load_scenario

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2

log = logging.getLogger("jcrevival")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jcrevival",
        description="Collapse and revival of Rabi oscillations in a lossy cavity (multi-mode Jaynes-Cummings).",
    )
    parser.add_argument("--config", help="scenario file (key = value); defaults to the Rb experiment constants")
    parser.add_argument("--out-dir", default=".", help="directory for curve.csv / summary.txt / residuals.csv")
    parser.add_argument("--verb", choices=("calibrate", "simulate", "report", "selftest"), default="report")
    parser.add_argument("--nbar", type=float, help="mean photon number, overrides the config value")
    parser.add_argument("--workers", type=int, default=None, help="process pool size for curve evaluation")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _scenario(args) -> Scenario:
    scenario = load_scenario(args.config) if args.config else Scenario(name="default")
    if args.nbar is not None:
        scenario = scenario.replace(nbar=args.nbar)
    return scenario


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.verb == "selftest":
            from .acceptance import run_all

            results = run_all()
            return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL
        scenario = _scenario(args)
        if args.verb == "calibrate":
            print("\n".join(summary_lines(calibrate_scenario(scenario))))
        elif args.verb == "simulate":
            run_report(scenario, args.out_dir, summary=False, residuals=False, workers=args.workers)
        else:
            written = run_report(scenario, args.out_dir, workers=args.workers)
            for path in written.values():
                print(path)
    except InvalidInputError as exc:
        log.error("invalid input: %s", exc)
        return EXIT_VALIDATION
    except (ConvergenceError, NoRootError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
