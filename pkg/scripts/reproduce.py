#!/usr/bin/env python3
"""
Reproduction script for PoissonProphet
Regenerates every table and curve into results/ by running the CLI
"""

import subprocess
import sys
import shutil
from pathlib import Path

# Project paths
PROJECT_ROOT = Path(__file__).parent.parent
RESULTS_DIR = PROJECT_ROOT / "results"

# (output file, CLI arguments)
RUNS = [
    ("constants.csv", ["constants"]),
    ("short_range_curves.csv", ["curve", "--which", "f,g,min_f_long", "--t", "0.01..10:500"]),
    ("difference_curves.csv", ["curve", "--which", "fhat,ghat", "--t", "0.01..10:500"]),
    ("bounds.json", ["--format", "json", "bounds", "--n", "8,100"]),
    ("two_point_search.csv", ["explore", "--t", "0.25..2:8"]),
    ("counterexample_c5.csv", ["renewal", "counterexample", "--n", "5", "--p", "0.8", "--pi", "0.001"]),
    ("counterexample_scan.csv", ["renewal", "explore"]),
    ("verify.csv", ["verify", "--renewal-count", "1000", "--report", str(RESULTS_DIR / "verify_reports.json")]),
    ("verify_unit.csv", ["verify", "--unit-interval"]),
]


def clean_results():
    """Remove previous results."""
    print("\nCleaning previous results...")
    if RESULTS_DIR.exists():
        shutil.rmtree(RESULTS_DIR)
        print(f"  Removed {RESULTS_DIR}")
    RESULTS_DIR.mkdir()
    print("✓ Clean complete")


def run_one(filename, args):
    """Run one CLI invocation, writing stdout to results/filename."""
    cmd = [sys.executable, str(PROJECT_ROOT / "main.py")] + args
    print(f"  {' '.join(args)}")
    with open(RESULTS_DIR / filename, "w") as out:
        result = subprocess.run(cmd, cwd=str(PROJECT_ROOT), stdout=out)
    if result.returncode == 0:
        print(f"✓ {filename}")
        return True
    print(f"✗ {filename} (exit {result.returncode})")
    return False


def main():
    """Main reproduction process."""
    print("=" * 50)
    print(" PoissonProphet Reproduction")
    print("=" * 50)

    clean_results()

    print("\nRunning...")
    failures = [name for name, args in RUNS if not run_one(name, args)]

    print("\n" + "=" * 50)
    if failures:
        print(f" {len(failures)} run(s) failed: {', '.join(failures)}")
        print("=" * 50)
        sys.exit(1)
    print(" Reproduction Complete!")
    print("=" * 50)
    print(f"\nResults in {RESULTS_DIR}")


if __name__ == "__main__":
    main()
