#!/usr/bin/env python3
"""Run every bundled experiment config and summarize the verdicts.

Outputs land in out/<config-stem>/; exit status is the worst exit code
seen (0 pass, 2 a threshold failed, 1 an error occurred).
"""

import sys
from pathlib import Path

from gaugedist.cli import main

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"
OUT = ROOT / "out"

RUNS = [
    (["body", "inspect"], "body_square.ini"),
    (["decay", "scan"], "decay_disk_l2.ini"),
    (["distset", "scan"], "distset_linf.ini"),
    (["fractal", "build"], "fractal_cantor.ini"),
    (["convert", "demo"], "convert_euclid.ini"),
    (["lemma", "check"], "lemma_disk.ini"),
]


def run_all() -> int:
    worst = 0
    for cmd, name in RUNS:
        cfg = CONFIGS / name
        out_dir = OUT / cfg.stem
        print(f"== {' '.join(cmd)}  ({name}) -> {out_dir}")
        rc = main(cmd + ["--config", str(cfg), "--out", str(out_dir)])
        print(f"   exit {rc}")
        worst = max(worst, rc)
    return worst


if __name__ == "__main__":
    sys.exit(run_all())
