#!/usr/bin/env python3
"""Ancilla-invariance demonstration at a nonadditive index pair.

Writes results/ancilla_check.csv: per sample, the measure before and after
appending an uncorrelated mixed ancilla, with rescaled and unrescaled
drifts.  The unrescaled column is what the purity factor exists to fix.
"""

import pathlib
import sys

from qcorr.cli import main

RESULTS = pathlib.Path(__file__).resolve().parent.parent / "results"
RESULTS.mkdir(exist_ok=True)

sys.exit(main([
    "ancilla-check", "--q", "2", "--s", "1", "--samples", "20",
    "--seed", "20260810", "--out", str(RESULTS / "ancilla_check.csv"),
]))
