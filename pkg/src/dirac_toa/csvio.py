"""CSV and manifest output: '#'-prefixed metadata headers, shortest
round-trip float formatting so re-runs reproduce files bit-identically."""

from __future__ import annotations

import configparser
from pathlib import Path
from typing import Mapping

import numpy as np


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(
    path: Path,
    columns: Mapping[str, np.ndarray],
    metadata: Mapping[str, object] | None = None,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    n_rows = len(arrays[0])
    if any(len(a) != n_rows for a in arrays):
        raise ValueError("all columns must have equal length")
    lines = []
    for key, val in (metadata or {}).items():
        lines.append(f"# {key} = {_fmt(val)}")
    lines.append(",".join(names))
    for i in range(n_rows):
        lines.append(",".join(_fmt(a[i]) for a in arrays))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path: Path):
    """Return (metadata dict, column dict of float arrays)."""
    meta = {}
    rows = []
    names = None
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            meta[key.strip()] = val.strip()
            continue
        if names is None:
            names = [c.strip() for c in line.split(",")]
            continue
        rows.append([float(v) for v in line.split(",")])
    data = np.asarray(rows, dtype=float) if rows else np.zeros((0, len(names or [])))
    return meta, {n: data[:, j] for j, n in enumerate(names or [])}


def write_manifest(path: Path, sections: Mapping[str, Mapping[str, object]]) -> Path:
    """Flat key=value sections, loadable back as a run configuration."""
    cp = configparser.ConfigParser()
    cp.optionxform = str
    for sec, kv in sections.items():
        cp[sec] = {k: _fmt(v) for k, v in kv.items()}
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        cp.write(fh)
    return path


def read_manifest(path: Path) -> dict[str, dict[str, str]]:
    cp = configparser.ConfigParser()
    cp.optionxform = str
    with Path(path).open() as fh:
        cp.read_file(fh)
    return {sec: dict(cp[sec]) for sec in cp.sections()}
