"""Result persistence: CSV tables and YAML run summaries.

Floats are written with 17 significant digits so a CSV round-trip is
exact, and identical inputs produce byte-identical files.
"""
from __future__ import annotations

import csv
import os
from pathlib import Path

import yaml


def format_cell(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_csv(path, header, rows) -> None:
    """Header row plus one record per row; floats at 17 significant digits."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([format_cell(v) for v in row])
    except OSError as exc:
        raise OSError(f"failed to write CSV {path}: {exc}") from exc


def write_summary(summary: dict, path) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            yaml.safe_dump(summary, fh, sort_keys=True)
    except OSError as exc:
        raise OSError(f"failed to write summary {path}: {exc}") from exc


def default_output_root() -> Path:
    """Output root from ONEFLAB_OUT_ROOT, falling back to ./oneflab-out."""
    return Path(os.environ.get("ONEFLAB_OUT_ROOT", "oneflab-out"))
