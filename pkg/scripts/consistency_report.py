"""Write text and JSON consistency reports for FDA1..FDA3."""
import argparse
from pathlib import Path

from nsfda.consistency.analyzer import full_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--order-bound", type=int, default=6)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for scheme in (1, 2, 3):
        rep = full_report(scheme, order_bound=args.order_bound)
        (args.out / f"consistency_fda{scheme}.json").write_text(rep.to_json() + "\n")
        (args.out / f"consistency_fda{scheme}.txt").write_text(rep.to_text())
        print(f"FDA{scheme}: s-verdict {rep.s_verdict}, "
              f"w-verdicts {[w.holds for w in rep.w_verdicts]}")


if __name__ == "__main__":
    main()
