#!/usr/bin/env python3
"""Run every desk-scale study preset into results/<name>.  A few minutes on
a laptop; see run_full_studies.py for the production-resolution runs."""

import sys
from pathlib import Path

from dirac_toa.cli import main

STUDIES = [
    ("initial-state", "fig1-desk"),
    ("arrival-scan", "fig2-desk"),
    ("density", "fig4-desk"),
    ("frames", "fig10-desk"),
    ("point", "fig5-desk"),
    ("pdp", "pdp-desk"),
]

if __name__ == "__main__":
    base = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    for command, preset in STUDIES:
        out = base / preset
        print(f"== {command} --preset {preset} -> {out}")
        rc = main([command, "--preset", preset, "--out", str(out)])
        if rc != 0:
            sys.exit(rc)
    print(f"all studies written under {base}/")
