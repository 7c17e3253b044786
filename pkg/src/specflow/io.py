"""Reading matrices and windows, writing CSV/JSON reports."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .spectrum import SpectrumWindow


def _from_nested(rows) -> np.ndarray:
    arr = np.array(rows, dtype=float)
    if arr.ndim != 2:
        raise ValueError("matrix must be a 2-d array")
    return arr


def read_matrix_file(path) -> np.ndarray:
    """Dense matrix from a JSON array or whitespace/comma separated text."""
    path = Path(path)
    text = path.read_text()
    stripped = text.lstrip()
    if stripped.startswith("[") or stripped.startswith("{"):
        return parse_matrix(json.loads(text), path.parent)
    rows = [line.replace(",", " ").split() for line in text.splitlines()]
    rows = [r for r in rows if r and not r[0].startswith("#")]
    return _from_nested([[float(x) for x in r] for r in rows])


def parse_matrix(desc, base: Path | None = None) -> np.ndarray:
    """Matrix descriptor: nested list, ``{"diag": [...]}``,
    ``{"real": [[...]], "imag": [[...]]}`` or ``{"file": path}``."""
    if isinstance(desc, list):
        return _from_nested(desc)
    if isinstance(desc, str):
        desc = {"file": desc}
    if not isinstance(desc, dict):
        raise ValueError(f"cannot parse matrix descriptor {desc!r}")
    keys = set(desc)
    if keys == {"diag"}:
        return np.diag(np.array(desc["diag"], dtype=float))
    if keys == {"file"}:
        p = Path(desc["file"])
        if base is not None and not p.is_absolute():
            p = base / p
        return read_matrix_file(p)
    if keys <= {"real", "imag"} and "real" in keys:
        re = _from_nested(desc["real"])
        im = _from_nested(desc.get("imag", np.zeros_like(re).tolist()))
        if re.shape != im.shape:
            raise ValueError("real and imaginary parts differ in shape")
        return re + 1j * im
    raise ValueError(f"unknown matrix descriptor keys {sorted(keys)}")


def read_window(path) -> SpectrumWindow:
    return SpectrumWindow.from_json(Path(path).read_text())


def fmt(x: float) -> str:
    """Shortest round-trip representation."""
    return repr(float(x))


def write_window(window: SpectrumWindow, stem: Path):
    stem.with_suffix(".json").write_text(json.dumps(window.to_dict(), indent=2) + "\n")
    lines = ["j,lambda"] + [f"{j},{fmt(x)}" for j, x in zip(window.indices, window.values)]
    stem.with_suffix(".csv").write_text("\n".join(lines) + "\n")


def write_track_csv(path, rows):
    lines = ["t,j,lambda"] + [f"{fmt(t)},{j},{fmt(x)}" for t, j, x in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
