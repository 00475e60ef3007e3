"""Raster container used for every grid in the repo.

Layout: one line of JSON (terminated by a newline) describing the grid,
followed by the raw row-major little-endian float32 payload.  The header
carries n_cols, n_rows, x0, y0, cell_size, nodata, byte_order and dtype so
a file is self-describing; extra keys are preserved on round-trip.
"""

import json

import numpy as np

from ssbathy.errors import ParameterError

NODATA = -9999.0


def write_grid(path, values, x0=0.0, y0=0.0, cell_size=1.0, nodata=NODATA, extra=None):
    """Write a 2-D array as header + raw f32 payload. Returns the header dict."""
    values = np.asarray(values)
    if values.ndim != 2:
        raise ParameterError(f"grid payload must be 2-D, got shape {values.shape}")
    header = {
        "n_cols": int(values.shape[1]),
        "n_rows": int(values.shape[0]),
        "x0": float(x0),
        "y0": float(y0),
        "cell_size": float(cell_size),
        "nodata": float(nodata),
        "byte_order": "LE",
        "dtype": "f32",
    }
    if extra:
        header.update(extra)
    payload = np.ascontiguousarray(values, dtype="<f4")
    with open(path, "wb") as f:
        f.write(json.dumps(header, sort_keys=True).encode("utf-8"))
        f.write(b"\n")
        f.write(payload.tobytes())
    return header


def read_grid(path):
    """Read a raster file; returns (values as float64 array, header dict)."""
    with open(path, "rb") as f:
        header_line = f.readline()
        try:
            header = json.loads(header_line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ParameterError(f"{path}: malformed grid header") from exc
        for key in ("n_cols", "n_rows", "cell_size"):
            if key not in header:
                raise ParameterError(f"{path}: grid header missing {key!r}")
        if header.get("dtype", "f32") != "f32" or header.get("byte_order", "LE") != "LE":
            raise ParameterError(f"{path}: unsupported grid encoding")
        n = header["n_rows"] * header["n_cols"]
        raw = f.read(4 * n)
    if len(raw) != 4 * n:
        raise ParameterError(f"{path}: truncated payload ({len(raw)} of {4 * n} bytes)")
    values = np.frombuffer(raw, dtype="<f4").reshape(header["n_rows"], header["n_cols"])
    return values.astype(np.float64), header
