"""Matrix file formats, CSV tables, and key-value config files.

Matrices travel either as CSV (rows = observations, optional header) or as the
DFMX binary format: the 4-byte magic "DFMX", two little-endian uint64 giving n
and d, then n*d little-endian float64 in row-major order.  CSV floats are
written with 17 significant digits so a round trip reproduces the exact
double.  Schemas are documented in docs/formats.md.
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"DFMX"


class MatrixFormatError(ValueError):
    """File exists but does not contain a well-formed matrix."""


def write_matrix_binary(path, matrix: np.ndarray) -> None:
    matrix = np.ascontiguousarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValueError("matrix must be 2-D")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<QQ", matrix.shape[0], matrix.shape[1]))
        fh.write(matrix.astype("<f8", copy=False).tobytes())


def write_matrix_csv(path, matrix: np.ndarray, header: bool = True) -> None:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValueError("matrix must be 2-D")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow([f"x{i}" for i in range(matrix.shape[1])])
        for row in matrix:
            writer.writerow([format(v, ".17g") for v in row])


def write_matrix(path, matrix: np.ndarray) -> None:
    """Dispatch on extension: .dfmx is binary, everything else CSV."""
    if str(path).endswith(".dfmx"):
        write_matrix_binary(path, matrix)
    else:
        write_matrix_csv(path, matrix)


def _read_matrix_binary(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < 20:
        raise MatrixFormatError(f"{path}: truncated binary matrix header")
    n, d = struct.unpack("<QQ", raw[4:20])
    expected = 20 + 8 * n * d
    if len(raw) != expected:
        raise MatrixFormatError(
            f"{path}: payload is {len(raw)} bytes, header implies {expected}"
        )
    matrix = np.frombuffer(raw, dtype="<f8", offset=20).reshape(n, d).copy()
    return matrix


def _read_matrix_csv(path) -> np.ndarray:
    rows: list[list[float]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, cells in enumerate(reader, start=1):
            if not cells or (len(cells) == 1 and not cells[0].strip()):
                continue
            try:
                values = [float(c) for c in cells]
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise MatrixFormatError(
                    f"{path}: row {lineno} is not numeric"
                ) from None
            rows.append(values)
    if not rows:
        raise MatrixFormatError(f"{path}: no data rows")
    width = len(rows[0])
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise MatrixFormatError(
                f"{path}: row {i} has {len(row)} columns, expected {width}"
            )
    return np.asarray(rows, dtype=np.float64)


def read_matrix(path) -> np.ndarray:
    """Read a matrix file (binary or CSV decided by the magic bytes)."""
    path = Path(path)
    if not path.exists():
        raise MatrixFormatError(f"{path}: no such file")
    with open(path, "rb") as fh:
        magic = fh.read(4)
    matrix = _read_matrix_binary(path) if magic == MAGIC else _read_matrix_csv(path)
    if not np.isfinite(matrix).all():
        bad = np.argwhere(~np.isfinite(matrix))[0]
        raise MatrixFormatError(
            f"{path}: non-finite entry at row {bad[0] + 1}, column {bad[1] + 1}"
        )
    return matrix


def write_rows_csv(path, rows, fieldnames=None) -> None:
    """Write dict rows as CSV, floats at 17 significant digits."""
    rows = list(rows)
    if fieldnames is None:
        fieldnames = list(rows[0].keys()) if rows else []
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(
                {
                    k: format(v, ".17g") if isinstance(v, float) else v
                    for k, v in row.items()
                }
            )


def read_rows_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def parse_config(path) -> dict[str, str]:
    """key = value lines; '#' starts a comment; values keep internal commas."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}: line {lineno} is not 'key = value'")
        key, value = stripped.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def parse_list(text: str, cast) -> list:
    return [cast(part.strip()) for part in text.split(",") if part.strip()]
