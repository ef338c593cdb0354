"""Dense real and complex tensors with the structural operations sketching builds on.

Tensors are immutable value objects: the backing array is copied and made
read-only at construction, and every operation returns a fresh tensor. Values
are 64-bit (complex128 for the complex variant), stored flat in row-major
order with the last index varying fastest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CapacityError",
    "ComplexTensor",
    "DenseTensor",
    "inner_product",
    "outer_product",
    "pad_with_ones",
    "reassemble",
    "subdivide",
]

# Cell budget keeps flat indices comfortably inside int64 (with byte offsets).
_MAX_CELLS = 2**56


class CapacityError(ValueError):
    """A requested tensor would exceed the addressable cell budget."""


def _checked_dims(dims: Iterable[int]) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if any(d < 0 for d in out):
        raise ValueError(f"dims must be nonnegative, got {out}")
    if math.prod(out) > _MAX_CELLS:
        raise CapacityError(f"dims {out} address {math.prod(out)} cells, over the {_MAX_CELLS} cap")
    return out


@dataclass(frozen=True, eq=False)
class DenseTensor:
    """Real-valued tensor of arbitrary order.

    ``dims`` is the shape; ``values`` holds exactly prod(dims) float64 entries
    flattened row-major. Order 0 is a scalar: empty dims, one value.
    """

    dims: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        dims = _checked_dims(self.dims)
        if np.iscomplexobj(self.values):
            raise ValueError("DenseTensor holds real values; use ComplexTensor")
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if values.size != math.prod(dims):
            raise ValueError(
                f"got {values.size} values for dims {dims} (need {math.prod(dims)})"
            )
        values.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, arr) -> "DenseTensor":
        a = np.asarray(arr, dtype=np.float64)
        return cls(a.shape, a.reshape(-1))

    @classmethod
    def vector(cls, values) -> "DenseTensor":
        v = np.asarray(values, dtype=np.float64).reshape(-1)
        return cls((v.size,), v)

    @classmethod
    def scalar(cls, value: float) -> "DenseTensor":
        return cls((), np.array([value]))

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def array(self) -> np.ndarray:
        """Shaped read-only view of the flat values."""
        return self.values.reshape(self.dims)

    def flattened(self) -> "DenseTensor":
        return DenseTensor((self.size,), self.values)

    def __getitem__(self, index) -> float:
        return float(self.array[index])

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        if self.size <= 8:
            return f"DenseTensor(dims={self.dims}, values={self.values.tolist()})"
        return f"DenseTensor(dims={self.dims}, <{self.size} values>)"


@dataclass(frozen=True, eq=False)
class ComplexTensor:
    """Complex-valued tensor, same layout conventions as DenseTensor."""

    dims: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        dims = _checked_dims(self.dims)
        values = np.array(self.values, dtype=np.complex128).reshape(-1)
        if values.size != math.prod(dims):
            raise ValueError(
                f"got {values.size} values for dims {dims} (need {math.prod(dims)})"
            )
        values.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, arr) -> "ComplexTensor":
        a = np.asarray(arr, dtype=np.complex128)
        return cls(a.shape, a.reshape(-1))

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def array(self) -> np.ndarray:
        return self.values.reshape(self.dims)

    def __getitem__(self, index) -> complex:
        return complex(self.array[index])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexTensor):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        if self.size <= 8:
            return f"ComplexTensor(dims={self.dims}, values={self.values.tolist()})"
        return f"ComplexTensor(dims={self.dims}, <{self.size} values>)"


def outer_product(a: DenseTensor, b: DenseTensor) -> DenseTensor:
    """Tensor (outer) product: result dims are a.dims ++ b.dims."""
    _checked_dims(a.dims + b.dims)
    return DenseTensor.from_array(np.multiply.outer(a.array, b.array))


def inner_product(a: DenseTensor, b: DenseTensor) -> float:
    """Sum of elementwise products; both tensors must share dims exactly."""
    if a.dims != b.dims:
        raise ValueError(f"dimension mismatch: {a.dims} vs {b.dims}")
    return float(np.dot(a.values, b.values))


def pad_with_ones(x: DenseTensor, pad_len: int) -> DenseTensor:
    """Append pad_len ones to a vector: [x; 1, 1, ..., 1]."""
    if x.order != 1:
        raise ValueError(f"pad_with_ones needs an order-1 tensor, got order {x.order}")
    if pad_len < 0:
        raise ValueError(f"pad_len must be nonnegative, got {pad_len}")
    return DenseTensor.vector(np.concatenate([x.values, np.ones(pad_len)]))


def subdivide(
    t: DenseTensor, block_dims: Sequence[int]
) -> list[tuple[tuple[int, int, int], DenseTensor]]:
    """Tile an order-3 tensor into equal blocks.

    Returns (grid_coordinate, block) pairs in row-major grid order. Every
    block dim must divide the matching tensor dim; there is no implicit
    padding.
    """
    if t.order != 3:
        raise ValueError(f"subdivide needs an order-3 tensor, got order {t.order}")
    bdims = tuple(int(b) for b in block_dims)
    if len(bdims) != 3 or any(b < 1 for b in bdims):
        raise ValueError(f"block_dims must be three positive integers, got {bdims}")
    for full, block in zip(t.dims, bdims):
        if full % block != 0:
            raise ValueError(f"block dim {block} does not divide tensor dim {full}")
    grid = tuple(full // block for full, block in zip(t.dims, bdims))
    arr = t.array
    out = []
    for g in np.ndindex(*grid):
        sl = tuple(slice(gi * b, (gi + 1) * b) for gi, b in zip(g, bdims))
        out.append((g, DenseTensor.from_array(arr[sl])))
    return out


def reassemble(
    blocks: Iterable[tuple[tuple[int, int, int], DenseTensor]],
    dims: Sequence[int],
) -> DenseTensor:
    """Inverse of subdivide: place blocks back by grid coordinate."""
    full = tuple(int(d) for d in dims)
    if len(full) != 3:
        raise ValueError(f"dims must have length 3, got {full}")
    blocks = list(blocks)
    if not blocks:
        raise ValueError("no blocks to reassemble")
    bdims = blocks[0][1].dims
    grid = tuple(f // b for f, b in zip(full, bdims))
    if tuple(f % b for f, b in zip(full, bdims)) != (0, 0, 0):
        raise ValueError(f"block dims {bdims} do not tile {full}")
    arr = np.empty(full, dtype=np.float64)
    seen = set()
    for g, block in blocks:
        if block.dims != bdims:
            raise ValueError(f"inconsistent block dims: {block.dims} vs {bdims}")
        if g in seen or any(not 0 <= gi < gd for gi, gd in zip(g, grid)):
            raise ValueError(f"bad grid coordinate {g}")
        seen.add(g)
        sl = tuple(slice(gi * b, (gi + 1) * b) for gi, b in zip(g, bdims))
        arr[sl] = block.array
    if len(seen) != math.prod(grid):
        raise ValueError(f"expected {math.prod(grid)} blocks, got {len(seen)}")
    return DenseTensor.from_array(arr)
