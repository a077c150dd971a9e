"""Deterministic CSV output with an embedded provenance line."""
from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__

FORMAT_VERSION = 1


def config_hash(config: dict) -> str:
    text = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def provenance_line(config: dict) -> str:
    return f"# quasicrit {__version__} format={FORMAT_VERSION} config_sha256={config_hash(config)}"


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v == 0.0:
            return "0"  # folds -0.0
        return format(v, ".12g")
    return str(value)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence], config: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(provenance_line(config) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def read_csv(path) -> tuple[str, list[str], list[list[str]]]:
    """Returns the provenance line, the header and the raw rows."""
    with open(path, newline="") as fh:
        prov = fh.readline().rstrip("\n")
        rows = list(csv.reader(fh))
    return prov, rows[0], rows[1:]


def recorded_hash(path) -> str:
    prov, _, _ = read_csv(path)
    return prov.rsplit("config_sha256=", 1)[1]
