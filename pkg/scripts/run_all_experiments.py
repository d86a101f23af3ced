"""Run the full set of standard experiments through the CLI.

    python scripts/run_all_experiments.py --out results --workers 4

Each experiment lands in its own sub-directory with CSVs, fit summaries and a
manifest.  Nothing is plotted.
"""
import argparse
import sys
from pathlib import Path

from lrkqfi.cli import main as cli

EXPERIMENTS = {
    "dispersion_a1.5": ["dispersion", "--L", "400", "--alpha", "1.5"],
    "dispersion_a3": ["dispersion", "--L", "400", "--alpha", "3"],
    "qfi_sweep_a1.5": ["qfi-sweep", "--L", "400", "--alpha", "1.5", "--mu-grid", "0:2:801"],
    "qfi_sweep_a3": ["qfi-sweep", "--L", "400", "--alpha", "3", "--mu-grid", "0:2:801"],
    "scaling_a1.3": ["scaling", "--alpha", "1.3", "--L", "100,200,400,800"],
    "scaling_a2": ["scaling", "--alpha", "2", "--L", "100,200,400,800"],
    "scaling_a5": ["scaling", "--alpha", "5", "--L", "100,200,400,800"],
    "ratio_L200": ["ratio", "--L", "200", "--alpha-grid", "1.3:5:20"],
    "ratio_L400": ["ratio", "--L", "400", "--alpha-grid", "1.3:5:20"],
    "ratio_L800": ["ratio", "--L", "800", "--alpha-grid", "1.3:5:20"],
    "surface_a1.3": ["uncertain-surface", "--L", "50", "--alpha", "1.3"],
    "surface_a5": ["uncertain-surface", "--L", "50", "--alpha", "5"],
    "uncertain_scaling_a1.3": ["uncertain-scaling", "--alpha", "1.3",
                               "--L", "20,30,40,50,60,80,100"],
    "uncertain_scaling_a5": ["uncertain-scaling", "--alpha", "5",
                             "--L", "20,30,40,50,60,80,100"],
    "sigma_threshold": ["sigma-threshold"],
    "uncertain_ratio_L30": ["uncertain-ratio", "--L", "30"],
    "uncertain_ratio_L50": ["uncertain-ratio", "--L", "50"],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--workers", default="1")
    ap.add_argument("--only", nargs="*", help="subset of experiment names")
    args = ap.parse_args()
    failures = []
    for name, argv in EXPERIMENTS.items():
        if args.only and name not in args.only:
            continue
        out = Path(args.out) / name
        print(f"{name} -> {out}", flush=True)
        if cli([*argv, "--out", str(out), "--workers", args.workers]) != 0:
            failures.append(name)
    if failures:
        print("failed:", ", ".join(failures), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
