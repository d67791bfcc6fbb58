#!/usr/bin/env python3
"""Contractivity sweep with the documented defaults (20 states x 1000 pairs).

Writes results/fig1.csv: one row per (state, entropy family, q) with the
minimal difference between the unilocal disturbance and its rescaled value
after a measurement on the other side; negative rows are violations.
"""

import pathlib
import sys

from qcorr.cli import main

RESULTS = pathlib.Path(__file__).resolve().parent.parent / "results"
RESULTS.mkdir(exist_ok=True)

sys.exit(main(["fig1", "--seed", "20260810", "--out", str(RESULTS / "fig1.csv")]))
