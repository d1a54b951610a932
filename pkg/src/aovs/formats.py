"""Matrix file formats and JSON/CSV report writers.

``f32bin`` layout (little-endian, no padding)::

    b"AOVS"  u32 version=1  u64 rows  u64 cols  rows*cols float32, row-major

``csv`` holds one vector per line, comma-separated, no header.  Values are
written with 17 significant digits so float64 data round-trips exactly.
"""

import json
import math
import os
import struct

import numpy as np

from .errors import FormatError
from .vecset import RawMatrix, UnitVectorSet

MAGIC = b"AOVS"
VERSION = 1
_HEADER = struct.Struct("<4sIQQ")
FORMATS = ("csv", "f32bin")
_EXTENSIONS = {".csv": "csv", ".f32": "f32bin", ".f32bin": "f32bin", ".bin": "f32bin"}


def infer_format(path, fmt=None):
    if fmt is not None:
        if fmt not in FORMATS:
            raise FormatError(f"unknown matrix format {fmt!r}; expected one of {FORMATS}")
        return fmt
    ext = os.path.splitext(str(path))[1].lower()
    try:
        return _EXTENSIONS[ext]
    except KeyError:
        raise FormatError(
            f"cannot infer matrix format from extension {ext!r} of {path}; pass a format"
        ) from None


def _array_of(m):
    if isinstance(m, (UnitVectorSet, RawMatrix)):
        return m.data
    return np.asarray(m, dtype=np.float64)


def write_matrix(m, path, fmt=None):
    fmt = infer_format(path, fmt)
    arr = _array_of(m)
    if arr.ndim != 2:
        raise FormatError(f"expected a 2-D matrix, got shape {arr.shape}")
    if fmt == "f32bin":
        rows, cols = arr.shape
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, VERSION, rows, cols))
            fh.write(np.ascontiguousarray(arr, dtype="<f4").tobytes())
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for row in arr:
                fh.write(",".join(format(float(v), ".17g") for v in row))
                fh.write("\n")


def _read_f32bin(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise FormatError(f"{path}: file too short for the f32bin header ({len(blob)} bytes)")
    magic, version, rows, cols = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported f32bin version {version}")
    expected = rows * cols * 4
    payload = blob[_HEADER.size:]
    if len(payload) != expected:
        raise FormatError(
            f"{path}: payload has {len(payload)} bytes, header declares {rows}x{cols} "
            f"({expected} bytes)"
        )
    arr = np.frombuffer(payload, dtype="<f4").reshape(rows, cols).astype(np.float64)
    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        r, c = bad[0]
        raise FormatError(f"{path}: non-finite value", row=int(r), col=int(c))
    return arr


def _read_csv(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    rows = []
    width = None
    for i, line in enumerate(lines):
        line = line.rstrip("\r")
        if not line.strip():
            raise FormatError(f"{path}: blank line", row=i)
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise FormatError(
                f"{path}: ragged row with {len(fields)} fields, expected {width}", row=i
            )
        vals = []
        for j, field in enumerate(fields):
            try:
                v = float(field)
            except ValueError:
                raise FormatError(f"{path}: not a number: {field.strip()!r}", row=i, col=j) from None
            if not math.isfinite(v):
                raise FormatError(f"{path}: non-finite value {field.strip()!r}", row=i, col=j)
            vals.append(v)
        rows.append(vals)
    if not rows:
        raise FormatError(f"{path}: no rows")
    return np.array(rows, dtype=np.float64)


def read_matrix(path, fmt=None):
    """Load a matrix file as a :class:`RawMatrix` (64-bit in memory)."""
    fmt = infer_format(path, fmt)
    arr = _read_f32bin(path) if fmt == "f32bin" else _read_csv(path)
    return RawMatrix(arr)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps_json(obj):
    """Serialise with insertion-ordered keys; floats keep full round-trip precision."""
    return json.dumps(_jsonable(obj), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def write_json(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_json(obj))


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_csv_cell(v) for v in row) + "\n")


def _csv_cell(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)
