#!/usr/bin/env python3
"""Closed-form vs optimizer curves for the three analytic families.

Writes results/<family>_q<q>_s<s>.csv with columns parameter, closed_form,
optimizer_value, abs_diff (plus the printed-form comparison for Werner).
"""

import pathlib
import sys

from qcorr.cli import main

RESULTS = pathlib.Path(__file__).resolve().parent.parent / "results"
RESULTS.mkdir(exist_ok=True)

INDEX_PAIRS = [("1", "1"), ("2", "1")]

rc = 0
for family in ("pseudopure", "isotropic", "werner"):
    for q, s in INDEX_PAIRS:
        out = RESULTS / f"{family}_q{q}_s{s}.csv"
        rc |= main([
            "family-curve", "--family", family, "--N", "2",
            "--q", q, "--s", s, "--grid", "11",
            "--restarts", "8", "--seed", "20260810", "--out", str(out),
        ])
sys.exit(rc)
