#!/usr/bin/env python3
"""Regenerate the figure datasets from the built-in sweep presets.

Writes one CSV per preset into the output directory and prints a short
summary (row counts, error-row counts) for each.
"""

import argparse
import pathlib
import sys

from pmcs import sweeps


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="figure_data", help="directory for the CSV files")
    parser.add_argument(
        "--preset", action="append", choices=sweeps.PRESET_NAMES,
        help="run only the given preset(s); default: all",
    )
    args = parser.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    names = args.preset or list(sweeps.PRESET_NAMES)
    for name in names:
        cfg = sweeps.preset_config(name)
        rows = sweeps.run_sweep(cfg)
        path = outdir / f"{name}.csv"
        sweeps.emit(rows, cfg, path=str(path))
        n_err = sum(1 for row in rows if row.error)
        print(f"{name}: {len(rows)} rows ({n_err} with an error column) -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
