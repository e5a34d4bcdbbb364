"""On-disk formats.

Curve files (``.crv``)::

    <dim> <period> <sample_count>
    x_1 x_2 ... x_dim          # one row per sample, t_j = j * period / N
    ...

Numbers are written with 17 significant digits, so ``read_curve`` followed
by ``write_curve`` reproduces a file byte for byte.

Torus descriptors are JSON objects::

    {"format": "willmore-tori/torus", "version": 1,
     "name": "...", "provenance": "...",
     "left": "left.crv", "right": "right.crv"}

Curve paths are resolved relative to the descriptor's directory.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import FormatError
from .sphere_curves import ClosedCurve
from .tensor_surfaces import TensorTorus, build_tensor_torus

TORUS_FORMAT = "willmore-tori/torus"


def fmt(x) -> str:
    """17-significant-digit decimal, the house style for every numeric output."""
    return format(float(x), ".17g")


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def curve_to_text(curve: ClosedCurve) -> str:
    lines = [f"{curve.ambient_dim} {fmt(curve.period)} {curve.sample_count}"]
    lines += [" ".join(fmt(x) for x in row) for row in curve.samples]
    return "\n".join(lines) + "\n"


def curve_from_text(text: str, name: str = "") -> ClosedCurve:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 3:
        raise FormatError("curve header must be 'dim period sample_count'")
    try:
        dim, period, n = int(rows[0][0]), float(rows[0][1]), int(rows[0][2])
        data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise FormatError(f"unparsable number in curve file: {exc}") from exc
    if data.shape != (n, dim):
        raise FormatError(f"expected {n} rows of {dim} coordinates, got shape {data.shape}")
    return ClosedCurve.from_samples(data, period, name=name)


def write_curve(curve: ClosedCurve, path) -> None:
    atomic_write(path, curve_to_text(curve))


def read_curve(path) -> ClosedCurve:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    return curve_from_text(text, name=path.stem)


def write_torus(torus: TensorTorus, path, provenance: str = "", left_name=None, right_name=None) -> None:
    """Write ``path`` (descriptor) plus the two factor curve files next to it."""
    path = Path(path)
    stem = path.stem
    left_name = left_name or f"{stem}.left.crv"
    right_name = right_name or f"{stem}.right.crv"
    write_curve(torus.left, path.parent / left_name)
    write_curve(torus.right, path.parent / right_name)
    desc = {"format": TORUS_FORMAT, "version": 1, "name": torus.name, "provenance": provenance,
            "left": left_name, "right": right_name}
    atomic_write(path, dumps(desc) + "\n")


def read_torus(path) -> TensorTorus:
    path = Path(path)
    try:
        desc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read torus descriptor {path}: {exc}") from exc
    if desc.get("format") != TORUS_FORMAT or desc.get("version") != 1:
        raise FormatError(f"{path} is not a version-1 {TORUS_FORMAT} descriptor")
    for key in ("left", "right"):
        if not isinstance(desc.get(key), str):
            raise FormatError(f"descriptor field {key!r} must be a path string")
    left = read_curve(path.parent / desc["left"])
    right = read_curve(path.parent / desc["right"])
    return build_tensor_torus(left, right, name=desc.get("name", ""))


def dumps(obj) -> str:
    """JSON with sorted keys and 17-digit floats; non-finite floats become ``null``."""

    def enc(o):
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return fmt(o) if math.isfinite(o) else "null"
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, dict):
            return "{" + ", ".join(f"{json.dumps(str(k))}: {enc(v)}" for k, v in sorted(o.items())) + "}"
        if isinstance(o, (list, tuple, np.ndarray)):
            return "[" + ", ".join(enc(v) for v in o) + "]"
        raise TypeError(f"cannot encode {type(o).__name__}")

    return enc(obj)
