"""Regenerate the CSV (and figure 4 SVG) outputs for all four figures."""
import argparse
import logging
from pathlib import Path

from nsfda.harness import reproduce_figure


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--figures", type=int, nargs="+", default=[1, 2, 3, 4])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)
    for n in args.figures:
        reports = reproduce_figure(n, args.out, args.workers)
        failed = [r for r in reports if r.error]
        print(f"figure {n}: {len(reports)} rows, {len(failed)} failed -> {args.out}")


if __name__ == "__main__":
    main()
