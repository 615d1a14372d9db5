#!/usr/bin/env python3
"""Render a sepnet sweep CSV as a misclassification curve.

Usage: plot_sweep.py SWEEP_CSV [OUT_PNG]

The input is the output of `sepnet sweep`: an annotation line with the
analytically sufficient steepness, a header, and one row per grid
point. The plot shows misclassifications against steepness with the
sufficient value marked.
"""

import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> int:
    if len(sys.argv) not in (2, 3):
        print(__doc__.strip(), file=sys.stderr)
        return 2
    path = Path(sys.argv[1])
    out = Path(sys.argv[2]) if len(sys.argv) == 3 else path.with_suffix(".png")

    with path.open(newline="") as handle:
        annotation = handle.readline().strip()
        prefix = "# sufficient_c_s,"
        if not annotation.startswith(prefix):
            print(f"{path}: missing sufficient_c_s annotation", file=sys.stderr)
            return 2
        sufficient = float(annotation[len(prefix):])
        rows = list(csv.DictReader(handle))

    steepness = [float(r["c_s"]) for r in rows]
    errors = [int(r["n_misclassified"]) for r in rows]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(steepness, errors, marker="o", markersize=3.5, linewidth=1.2)
    ax.axvline(
        sufficient,
        color="tab:red",
        linestyle="--",
        linewidth=1,
        label=f"sufficient $c_s$ = {sufficient:.2f}",
    )
    ax.set_xlabel("steepness factor $c_s$")
    ax.set_ylabel("misclassified points")
    ax.set_title(path.stem)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
