"""HFORM container: JSON manifest plus one raw float64 file per component.

Manifest::

    {"version": 1, "n": 2, "k": 1, "shape": [64, 64], "box": 6.283185307179586,
     "layout": "row-major-axis0-slowest",
     "components": [{"axes": [0], "data": "theta.c0.f64"}, ...]}

Each data file holds exactly N^n little-endian IEEE-754 doubles, paths
relative to the manifest. Component axes are 0-based. Missing components
are read as zero.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from hodgekit.exterior import FormIndex
from hodgekit.grid import GridForm, GridSpec

LAYOUT = "row-major-axis0-slowest"
VERSION = 1


class HFormError(ValueError):
    """Malformed manifest or data file."""


def _data_name(stem: str, idx: FormIndex) -> str:
    tag = "".join(str(a) for a in idx.axes) if idx.axes else "s"
    return f"{stem}.c{tag}.f64"


def write_form(f: GridForm, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    stem = path.name[: -len(path.suffix)] if path.suffix else path.name
    comps = []
    for idx, a in f.components.items():
        name = _data_name(stem, idx)
        np.ascontiguousarray(a, dtype="<f8").tofile(path.parent / name)
        comps.append({"axes": list(idx.axes), "data": name})
    manifest = {
        "version": VERSION,
        "n": f.spec.n,
        "k": f.k,
        "shape": list(f.spec.shape),
        "box": f.spec.L,
        "layout": LAYOUT,
        "components": comps,
    }
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _require(cond: bool, msg: str):
    if not cond:
        raise HFormError(msg)


def read_form(path) -> GridForm:
    path = Path(path)
    try:
        manifest = json.loads(path.read_text())
    except FileNotFoundError:
        raise HFormError(f"manifest not found: {path}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise HFormError(f"manifest is not valid JSON: {exc}") from None
    _require(isinstance(manifest, dict), "manifest must be a JSON object")
    required = {"version", "n", "k", "shape", "box", "layout", "components"}
    missing = required - manifest.keys()
    _require(not missing, f"manifest missing keys: {sorted(missing)}")
    _require(manifest["version"] == VERSION, f"unsupported version {manifest['version']!r}")
    _require(manifest["layout"] == LAYOUT, f"unsupported layout {manifest['layout']!r}")
    n, k, shape, box = manifest["n"], manifest["k"], manifest["shape"], manifest["box"]
    _require(isinstance(n, int) and 1 <= n <= 4, f"bad dimension {n!r}")
    _require(isinstance(k, int) and -1 <= k <= n + 1, f"bad degree {k!r}")
    _require(isinstance(shape, list) and len(shape) == n, f"shape {shape!r} does not match n={n}")
    _require(all(isinstance(s, int) for s in shape) and len(set(shape)) == 1,
             f"shape must be uniform integers, got {shape}")
    N = shape[0]
    _require(N >= 2 and N & (N - 1) == 0, f"N must be a power of two, got {N}")
    _require(isinstance(box, (int, float)) and box > 0, f"box must be positive, got {box!r}")
    spec = GridSpec(n, N, float(box))

    comps = {}
    _require(isinstance(manifest["components"], list), "components must be a list")
    for entry in manifest["components"]:
        _require(isinstance(entry, dict) and {"axes", "data"} <= entry.keys(), f"bad component entry {entry!r}")
        try:
            idx = FormIndex(tuple(entry["axes"]), n)
        except (ValueError, TypeError) as exc:
            raise HFormError(f"bad component axes {entry['axes']!r}: {exc}") from None
        _require(idx.degree == k, f"component {entry['axes']} has degree {idx.degree}, expected {k}")
        _require(idx not in comps, f"duplicate component {entry['axes']}")
        data_path = path.parent / entry["data"]
        _require(data_path.is_file(), f"data file not found: {data_path}")
        expected = N**n * 8
        size = data_path.stat().st_size
        _require(size == expected, f"{data_path.name}: {size} bytes, expected {expected}")
        comps[idx] = np.fromfile(data_path, dtype="<f8").reshape(spec.shape).astype(float)
    return GridForm(spec, k, comps)
