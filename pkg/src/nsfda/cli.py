"""Command line entry point: ``python3 -m nsfda {solve,sweep,figure,consistency}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .grid import ConfigError
from .harness import (ExperimentConfig, grid_configs, reproduce_figure, run, sweep, write_csv)
from .pressure import SolverError
from .schemes import InstabilityError

EXIT_OK, EXIT_INSTABILITY, EXIT_SOLVER, EXIT_CONFIG = 0, 2, 3, 4


def _int_list(text: str) -> list[int]:
    """``"5,10,15"`` or ``"5:50:5"`` (inclusive stop)."""
    try:
        if ":" in text:
            start, stop, step = (int(x) for x in text.split(":"))
            vals = list(range(start, stop + 1, step))
        else:
            vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nsfda", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="one run, errors at the final time")
    s.add_argument("--fda", required=True, choices=("1", "2", "3"))
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--tf", type=float, default=1.0)
    s.add_argument("--re", type=float, default=1e5)
    s.add_argument("--tau", type=float, default=None)
    s.add_argument("--out", type=Path, default=None, help="CSV file for the report row")

    w = sub.add_parser("sweep", help="runs over schemes x grid sizes")
    w.add_argument("--fda", type=_int_list, required=True)
    w.add_argument("--m", type=_int_list, required=True)
    w.add_argument("--steps", type=int, required=True)
    w.add_argument("--tf", type=float, default=1.0)
    w.add_argument("--re", type=float, default=1e5)
    w.add_argument("--tau", type=float, default=None)
    w.add_argument("--out", type=Path, required=True)
    w.add_argument("--workers", type=int, default=1)

    f = sub.add_parser("figure", help="preset sweeps for figures 1-4")
    f.add_argument("number", type=int, choices=(1, 2, 3, 4))
    f.add_argument("--out", type=Path, required=True, help="output directory")
    f.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("consistency", help="symbolic consistency report")
    c.add_argument("--fda", required=True, choices=("1", "2", "3"))
    c.add_argument("--report", type=Path, default=None,
                   help="JSON report path; the text report goes next to it with .txt")
    c.add_argument("--order-bound", type=int, default=6)
    return ap


def _code_for(error: str) -> int:
    if error.startswith("InstabilityError"):
        return EXIT_INSTABILITY
    if error.startswith("SolverError"):
        return EXIT_SOLVER
    if error.startswith("ConfigError"):
        return EXIT_CONFIG
    return 1


def _print_report(r) -> None:
    c = r.config
    print(f"{c.scheme.name} m={c.m} N={c.n_steps} tau={r.tau:g} Re={c.re:g}: "
          f"err_u={r.err_u:.3e} err_v={r.err_v:.3e} err_p={r.err_p:.3e} "
          f"res_e1={r.res_e1:.3e} ({r.runtime_s:.2f}s)")


def _cmd_solve(args) -> int:
    cfg = ExperimentConfig(int(args.fda), args.m, args.steps, args.tf, args.re, args.tau)
    report = run(cfg)
    _print_report(report)
    if args.out:
        write_csv([report], args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    for s in args.fda:
        if s not in (1, 2, 3):
            raise ConfigError(f"unknown scheme {s}")
    configs = grid_configs(args.fda, args.m, args.steps, args.tf, args.re, args.tau)
    reports = sweep(configs, args.workers)
    write_csv(reports, args.out)
    code = EXIT_OK
    for r in reports:
        if r.error:
            print(f"{r.config.scheme.name} m={r.config.m}: {r.error}", file=sys.stderr)
            code = code or _code_for(r.error)
        else:
            _print_report(r)
    return code


def _cmd_figure(args) -> int:
    reports = reproduce_figure(args.number, args.out, args.workers)
    code = EXIT_OK
    for r in reports:
        if r.error:
            print(f"{r.config.scheme.name} m={r.config.m}: {r.error}", file=sys.stderr)
            code = code or _code_for(r.error)
    print(f"wrote {len(reports)} rows to {args.out}")
    return code


def _cmd_consistency(args) -> int:
    from .consistency.analyzer import full_report
    report = full_report(int(args.fda), order_bound=args.order_bound)
    text = report.to_text()
    print(text, end="")
    if args.report:
        path = args.report
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.to_json() + "\n")
        path.with_suffix(".txt").write_text(text)
    return EXIT_OK


COMMANDS = {"solve": _cmd_solve, "sweep": _cmd_sweep, "figure": _cmd_figure,
            "consistency": _cmd_consistency}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InstabilityError as exc:
        print(f"instability: {exc}", file=sys.stderr)
        return EXIT_INSTABILITY
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ConfigError as exc:
        print(f"bad configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
