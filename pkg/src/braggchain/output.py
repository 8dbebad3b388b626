"""Delimited result tables and JSON metadata sidecars.

Floats are written with 17 significant digits so that a table round-trips
exactly and identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

SPECTRUM_COLUMNS = ("delta_mhz", "r_mean", "r_std", "t_mean", "t_std", "n_realizations")
ATOM_NUMBER_COLUMNS = ("survival", "expected_atoms", "peak_r", "peak_r_sem", "peak_delta_mhz",
                       "n_realizations")


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _write_rows(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_spectrum(path: Path, result, linewidth_mhz: float):
    rows = zip(result.delta * linewidth_mhz, result.r_mean, result.r_std,
               result.t_mean, result.t_std, [result.n_realizations] * len(result.delta))
    _write_rows(path, SPECTRUM_COLUMNS, rows)


def write_atom_number(path: Path, points, n_realizations: int, linewidth_mhz: float):
    rows = ((p.survival, p.expected_atoms, p.peak_r, p.peak_r_sem, p.peak_delta * linewidth_mhz,
             n_realizations) for p in points)
    _write_rows(path, ATOM_NUMBER_COLUMNS, rows)


def write_metadata(path: Path, metadata: dict):
    with open(path, "w") as fh:
        json.dump(metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_table(path: Path) -> dict:
    """Read a table written by this module back into columns of floats."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols = {name: [] for name in header}
        for row in reader:
            for name, value in zip(header, row):
                cols[name].append(float(value))
    return cols
