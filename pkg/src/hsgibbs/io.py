"""CSV ingestion and draws persistence."""
from __future__ import annotations

import csv
import hashlib
import struct
from pathlib import Path

import numpy as np

from .errors import DataError
from .glm import GlmData
from .linear import RegressionData

MAGIC = b"HSDRAWS1"
_DIMS = struct.Struct("<II")
_LEN = struct.Struct("<I")


class CsvParseError(DataError):
    def __init__(self, message, *, row=None, column=None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.row = row
        self.column = column


def read_numeric_csv(path):
    """Parse a headed, fully numeric CSV. Returns ``(header, matrix)``."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except FileNotFoundError:
        raise DataError(f"no such file: {path}") from None
    except UnicodeDecodeError as exc:
        raise CsvParseError(f"file is not UTF-8: {exc}") from None
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise CsvParseError("empty file")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if not body:
        raise CsvParseError("no data rows")
    out = np.empty((len(body), len(header)))
    for i, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise CsvParseError(f"ragged row: expected {len(header)} fields, got {len(r)}", row=i)
        for j, cell in enumerate(r):
            cell = cell.strip()
            if cell == "":
                raise CsvParseError("missing value", row=i, column=header[j])
            try:
                out[i - 2, j] = float(cell)
            except ValueError:
                raise CsvParseError(f"non-numeric cell {cell!r}", row=i, column=header[j]) from None
            if not np.isfinite(out[i - 2, j]):
                raise CsvParseError(f"non-finite cell {cell!r}", row=i, column=header[j])
    return header, out


def load_csv(path, family="linear", dispersion_h=None, standardize=True):
    """Load predictors (all but the last column) and response (last column).

    Linear data is standardised; GLM data gets a leading intercept column.
    """
    header, m = read_numeric_csv(path)
    if len(header) < 2:
        raise CsvParseError("need at least one predictor column and a response column", row=1)
    X, y, names = m[:, :-1], m[:, -1], header[:-1]
    if family == "linear":
        return RegressionData.from_arrays(X, y, standardize=standardize, names=names)
    return GlmData.with_intercept(X, y, family, dispersion_h, names)


def git_blob_hash(path) -> str:
    data = Path(path).read_bytes()
    h = hashlib.sha1()
    h.update(b"blob %d\0" % len(data))
    h.update(data)
    return h.hexdigest()


def write_draws_csv(path, draws, names):
    draws = np.asarray(draws, dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(names) + "\n")
        for row in draws:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def write_draws_binary(path, draws, names):
    """Compact columnar format: 8-byte magic, uint32 rows and cols, then a
    length-prefixed newline-joined name block and little-endian float64 data
    stored column by column."""
    draws = np.asarray(draws, dtype="<f8")
    rows, cols = draws.shape
    blob = "\n".join(names).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_DIMS.pack(rows, cols))
        fh.write(_LEN.pack(len(blob)))
        fh.write(blob)
        fh.write(np.asfortranarray(draws).T.tobytes())


def write_draws(path, draws, names, fmt="csv"):
    if fmt == "binary":
        write_draws_binary(path, draws, names)
    else:
        write_draws_csv(path, draws, names)


def read_draws(path):
    """Read a draws file in either format. Returns ``(names, matrix)``."""
    path = Path(path)
    try:
        head = path.open("rb").read(len(MAGIC))
    except FileNotFoundError:
        raise DataError(f"no such file: {path}") from None
    if head == MAGIC:
        raw = path.read_bytes()
        off = len(MAGIC)
        rows, cols = _DIMS.unpack_from(raw, off)
        off += _DIMS.size
        (nlen,) = _LEN.unpack_from(raw, off)
        off += _LEN.size
        names = raw[off : off + nlen].decode("utf-8").split("\n") if nlen else []
        off += nlen
        if len(raw) - off != rows * cols * 8 or len(names) != cols:
            raise DataError(f"malformed binary draws file {path}")
        cols_major = np.frombuffer(raw, dtype="<f8", offset=off).reshape(cols, rows)
        return names, np.ascontiguousarray(cols_major.T).astype(float)
    return read_numeric_csv(path)
