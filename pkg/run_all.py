"""
run_all.py

Runs the numbered pipeline stages in src/ in order, each in its own
interpreter, and stops at the first stage that exits non-zero.

Run:
  python run_all.py                 # every stage
  python run_all.py --from 03       # stages 03..07
  python run_all.py --only 02 07    # just these
  python run_all.py --list
"""

import argparse
import subprocess
import sys
import time
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent
SRC_DIR = BASE_DIR / "src"

PIPELINE = [
    "01_stage_minimum_entropy.py",
    "02_stage_spin_entropy.py",
    "03_stage_frame_invariance.py",
    "04_stage_cpt_invariance.py",
    "05_stage_lorentz_measure.py",
    "06_stage_entropy_dynamics.py",
    "07_export_report_artifacts.py",
]


def select_stages(only=None, start=None):
    stages = PIPELINE
    if only:
        wanted = {s.zfill(2) for s in only}
        unknown = wanted - {s[:2] for s in PIPELINE}
        if unknown:
            raise SystemExit(f"[ERROR] Unknown stage number(s): {', '.join(sorted(unknown))}")
        stages = [s for s in stages if s[:2] in wanted]
    if start:
        stages = [s for s in stages if s[:2] >= start.zfill(2)]
    return stages


def run_script(script_name):
    script_path = SRC_DIR / script_name
    print(f"\n==> Running {script_name}")
    t0 = time.perf_counter()
    result = subprocess.run([sys.executable, str(script_path)], cwd=str(BASE_DIR))
    elapsed = time.perf_counter() - t0
    if result.returncode != 0:
        print(f"[ERROR] {script_name} exited with code {result.returncode} after {elapsed:.1f}s", file=sys.stderr)
        sys.exit(result.returncode)
    print(f"    done in {elapsed:.1f}s")


def main():
    parser = argparse.ArgumentParser(description="Run the phase-space entropy pipeline.")
    parser.add_argument("--only", nargs="+", metavar="NN", help="run only these stage numbers")
    parser.add_argument("--from", dest="start", metavar="NN", help="start at this stage number")
    parser.add_argument("--list", action="store_true", help="print the stages and exit")
    args = parser.parse_args()

    stages = select_stages(args.only, args.start)
    if args.list:
        print("\n".join(stages))
        return

    print("Phase-Space Entropy Pipeline")
    print("============================")

    for script in stages:
        run_script(script)

    print(f"\nPipeline complete ({len(stages)} stages).")


if __name__ == "__main__":
    main()
