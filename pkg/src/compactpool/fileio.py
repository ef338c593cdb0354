"""Bit-exact tensor files and benchmark CSV emission.

Tensor file layout (all little-endian):

    bytes 0..3   magic "TSK1"
    byte  4      format version (1)
    byte  5      order (number of dims)
    byte  6      dtype: 0 = float64, 1 = complex (interleaved re, im float64)
    byte  7      reserved, must be 0
    next  8*order  dims as unsigned 64-bit integers
    rest         values, row-major, 8 bytes each (16 for complex)

No compression, no timestamps: identical inputs produce byte-identical files,
and round-trips preserve every finite value including signed zeros.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from .tensor import ComplexTensor, DenseTensor

__all__ = [
    "BadMagicError",
    "BenchRecord",
    "CSV_HEADER",
    "DimsOverflowError",
    "TensorFileError",
    "TruncatedPayloadError",
    "UnsupportedVersionError",
    "read_tensor",
    "write_csv",
    "write_tensor",
]

MAGIC = b"TSK1"
FORMAT_VERSION = 1
DTYPE_REAL = 0
DTYPE_COMPLEX = 1
_HEADER = struct.Struct("<4sBBBB")
_DIM = struct.Struct("<Q")
# Cells bound rejects absurd headers before any allocation is attempted.
_MAX_FILE_CELLS = 2**48


class TensorFileError(ValueError):
    """Base class for tensor file format violations."""


class BadMagicError(TensorFileError):
    pass


class UnsupportedVersionError(TensorFileError):
    pass


class TruncatedPayloadError(TensorFileError):
    pass


class DimsOverflowError(TensorFileError):
    pass


def write_tensor(t: Union[DenseTensor, ComplexTensor], path) -> None:
    """Serialize a tensor; read_tensor(path) restores it bit-exactly."""
    is_complex = isinstance(t, ComplexTensor)
    dtype = DTYPE_COMPLEX if is_complex else DTYPE_REAL
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, t.order, dtype, 0)
    dims = b"".join(_DIM.pack(d) for d in t.dims)
    payload = t.values.astype("<c16" if is_complex else "<f8").tobytes()
    Path(path).write_bytes(header + dims + payload)


def read_tensor(path) -> Union[DenseTensor, ComplexTensor]:
    """Parse a tensor file, with a distinct error for each violation."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise TruncatedPayloadError(f"file has {len(data)} bytes, header needs {_HEADER.size}")
    magic, version, order, dtype, reserved = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(f"version {version}, expected {FORMAT_VERSION}")
    if dtype not in (DTYPE_REAL, DTYPE_COMPLEX):
        raise TensorFileError(f"unknown dtype byte {dtype}")
    if reserved != 0:
        raise TensorFileError(f"reserved byte must be 0, got {reserved}")
    dims_end = _HEADER.size + _DIM.size * order
    if len(data) < dims_end:
        raise TruncatedPayloadError(f"file ends inside the dims block ({len(data)} bytes)")
    dims = tuple(
        _DIM.unpack_from(data, _HEADER.size + _DIM.size * i)[0] for i in range(order)
    )
    cells = math.prod(dims)
    if cells > _MAX_FILE_CELLS:
        raise DimsOverflowError(f"dims {dims} declare {cells} cells, over {_MAX_FILE_CELLS}")
    itemsize = 16 if dtype == DTYPE_COMPLEX else 8
    expected = dims_end + cells * itemsize
    if len(data) != expected:
        raise TruncatedPayloadError(
            f"dims {dims} declare {expected} bytes, file has {len(data)}"
        )
    kind = "<c16" if dtype == DTYPE_COMPLEX else "<f8"
    values = np.frombuffer(data, dtype=kind, count=cells, offset=dims_end)
    if dtype == DTYPE_COMPLEX:
        return ComplexTensor(dims, values)
    return DenseTensor(dims, values)


VALID_METHODS = ("mcb", "mct", "poly")
VALID_METRICS = ("rel_err_inner", "max_abs_err", "runtime_ns", "bytes")
CSV_HEADER = ["method", "n1", "n2", "C", "H", "W", "L", "d", "trial", "seed", "metric", "value"]


@dataclass(frozen=True)
class BenchRecord:
    """One row of a benchmark sweep; size fields not used by the method stay None."""

    method: str
    d: int
    trial: int
    seed: int
    metric: str
    value: float
    n1: Optional[int] = None
    n2: Optional[int] = None
    C: Optional[int] = None
    H: Optional[int] = None
    W: Optional[int] = None
    L: Optional[int] = None

    def __post_init__(self) -> None:
        if self.method not in VALID_METHODS:
            raise ValueError(f"method must be one of {VALID_METHODS}, got {self.method!r}")
        if self.metric not in VALID_METRICS:
            raise ValueError(f"metric must be one of {VALID_METRICS}, got {self.metric!r}")


def write_csv(records: Iterable[BenchRecord], path) -> None:
    """Emit records under the fixed header; reals carry 17 significant digits."""
    def cell(v) -> str:
        return "" if v is None else str(v)

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.method,
                    cell(r.n1),
                    cell(r.n2),
                    cell(r.C),
                    cell(r.H),
                    cell(r.W),
                    cell(r.L),
                    r.d,
                    r.trial,
                    r.seed,
                    r.metric,
                    f"{float(r.value):.17g}",
                ]
            )
