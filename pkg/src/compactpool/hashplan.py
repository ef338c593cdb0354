"""Random hash/sign families that parameterize every sketch.

Tables are fully materialized arrays, one (hash, sign) pair per tensor mode.
Mode m of a plan draws from its own PCG64 stream seeded with
``SeedSequence(seed, spawn_key=(m,))``, so adding modes never perturbs the
tables of earlier modes and the same (seed, dims) always rebuilds the same
plan. The PRNG choice is part of this library's compatibility contract;
reproducibility across other implementations goes through save_plan()/
load_plan(), not PRNG equality.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "ModeHash",
    "PlanFormatError",
    "SketchPlan",
    "build_plan",
    "compose_diag",
    "compose_sum",
    "derive_seed",
    "image_text_plans",
    "load_plan",
    "paired_vector_plans",
    "repeated_vector_plans",
    "save_plan",
]

PLAN_FORMAT_VERSION = 1


class PlanFormatError(ValueError):
    """Serialized plan text is malformed or violates the schema."""


def _norm_seed(seed: int) -> int:
    return int(seed) % 2**64


def derive_seed(seed: int, *tokens) -> int:
    """Derive a child seed from a base seed and a token path.

    Stable across runs and platforms (SHA-256 over the rendered tokens), so
    one top-level seed reproduces a whole pipeline of sub-plans.
    """
    material = "\x1f".join([str(_norm_seed(seed)), *map(str, tokens)])
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass(frozen=True, eq=False)
class ModeHash:
    """Hash and sign tables for one tensor mode: [input_size] -> [output_size]."""

    input_size: int
    output_size: int
    hash_table: np.ndarray
    sign_table: np.ndarray

    def __post_init__(self) -> None:
        n = int(self.input_size)
        d = int(self.output_size)
        if n < 1 or d < 1:
            raise ValueError(f"sizes must be positive, got {n} -> {d}")
        h = np.array(self.hash_table, dtype=np.int64).reshape(-1)
        s = np.array(self.sign_table, dtype=np.int64).reshape(-1)
        if h.size != n or s.size != n:
            raise ValueError(f"tables must have length {n}, got {h.size} and {s.size}")
        if h.size and (h.min() < 0 or h.max() >= d):
            raise ValueError(f"hash entries must lie in [0, {d})")
        if not np.all(np.abs(s) == 1):
            raise ValueError("sign entries must be +1 or -1")
        h.flags.writeable = False
        s.flags.writeable = False
        object.__setattr__(self, "input_size", n)
        object.__setattr__(self, "output_size", d)
        object.__setattr__(self, "hash_table", h)
        object.__setattr__(self, "sign_table", s)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModeHash):
            return NotImplemented
        return (
            self.input_size == other.input_size
            and self.output_size == other.output_size
            and np.array_equal(self.hash_table, other.hash_table)
            and np.array_equal(self.sign_table, other.sign_table)
        )


@dataclass(frozen=True, eq=False)
class SketchPlan:
    """One ModeHash per tensor mode plus the seed the tables were drawn from."""

    modes: tuple[ModeHash, ...]
    seed: int

    def __post_init__(self) -> None:
        modes = tuple(self.modes)
        if not modes:
            raise ValueError("a plan needs at least one mode")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def order(self) -> int:
        return len(self.modes)

    @property
    def input_dims(self) -> tuple[int, ...]:
        return tuple(m.input_size for m in self.modes)

    @property
    def output_dims(self) -> tuple[int, ...]:
        return tuple(m.output_size for m in self.modes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SketchPlan):
            return NotImplemented
        return self.seed == other.seed and self.modes == other.modes


def _mode_rng(seed: int, mode: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(mode,))))


def build_plan(input_dims: Sequence[int], output_dims: Sequence[int], seed: int) -> SketchPlan:
    """Draw uniform hash and sign tables for every mode.

    Entirely determined by (seed, input_dims, output_dims); distinct modes use
    independent streams.
    """
    ins = [int(n) for n in input_dims]
    outs = [int(d) for d in output_dims]
    if len(ins) != len(outs):
        raise ValueError(f"input/output dim count mismatch: {len(ins)} vs {len(outs)}")
    if not ins:
        raise ValueError("need at least one mode")
    if any(n < 1 for n in ins) or any(d < 1 for d in outs):
        raise ValueError(f"all sizes must be >= 1, got {ins} -> {outs}")
    seed = _norm_seed(seed)
    modes = []
    for m, (n, d) in enumerate(zip(ins, outs)):
        rng = _mode_rng(seed, m)
        hash_table = rng.integers(0, d, size=n, dtype=np.int64)
        sign_table = rng.integers(0, 2, size=n, dtype=np.int64) * 2 - 1
        modes.append(ModeHash(n, d, hash_table, sign_table))
    return SketchPlan(tuple(modes), seed)


def compose_sum(px: SketchPlan, py: SketchPlan) -> SketchPlan:
    """Plan for the flattened outer product of two sketched vectors.

    For flat index t = i * n2 + j the composed tables are
    hash(t) = (hx(i) + hy(j)) mod d and sign(t) = sx(i) * sy(j).
    """
    if px.order != 1 or py.order != 1:
        raise ValueError("compose_sum needs two order-1 plans")
    d = px.modes[0].output_size
    if py.modes[0].output_size != d:
        raise ValueError(
            f"output-size mismatch: {d} vs {py.modes[0].output_size}"
        )
    hx, sx = px.modes[0].hash_table, px.modes[0].sign_table
    hy, sy = py.modes[0].hash_table, py.modes[0].sign_table
    hashes = ((hx[:, None] + hy[None, :]) % d).ravel()
    signs = (sx[:, None] * sy[None, :]).ravel()
    mode = ModeHash(hx.size * hy.size, d, hashes, signs)
    return SketchPlan((mode,), derive_seed(px.seed, "compose_sum", py.seed))


def compose_diag(p_img: SketchPlan, p_txt: SketchPlan) -> SketchPlan:
    """Plan for the flattened order-4 product of an order-3 tensor and a vector.

    Cell (i, j, k, l) lands at ((h1(i)+h4(l)) mod d, (h2(j)+h4(l)) mod d,
    (h3(k)+h4(l)) mod d) with sign s1 s2 s3 s4; realized as a single-mode plan
    over the row-major flattened input onto a row-major flattened (d, d, d)
    output.
    """
    if p_img.order != 3 or p_txt.order != 1:
        raise ValueError("compose_diag needs an order-3 plan and an order-1 plan")
    sizes = set(p_img.output_dims) | set(p_txt.output_dims)
    if len(sizes) != 1:
        raise ValueError(
            f"all four output sizes must be equal, got {p_img.output_dims + p_txt.output_dims}"
        )
    d = sizes.pop()
    (m1, m2, m3), m4 = p_img.modes, p_txt.modes[0]
    h1 = m1.hash_table.reshape(-1, 1, 1, 1)
    h2 = m2.hash_table.reshape(1, -1, 1, 1)
    h3 = m3.hash_table.reshape(1, 1, -1, 1)
    h4 = m4.hash_table.reshape(1, 1, 1, -1)
    t1 = (h1 + h4) % d
    t2 = (h2 + h4) % d
    t3 = (h3 + h4) % d
    flat = ((t1 * d + t2) * d + t3).ravel()
    signs = (
        m1.sign_table.reshape(-1, 1, 1, 1)
        * m2.sign_table.reshape(1, -1, 1, 1)
        * m3.sign_table.reshape(1, 1, -1, 1)
        * m4.sign_table.reshape(1, 1, 1, -1)
    ).ravel()
    n = m1.input_size * m2.input_size * m3.input_size * m4.input_size
    mode = ModeHash(n, d**3, flat, signs)
    return SketchPlan((mode,), derive_seed(p_img.seed, "compose_diag", p_txt.seed))


def save_plan(p: SketchPlan) -> str:
    """Render a plan as a JSON document; see load_plan for the inverse."""
    doc = {
        "version": PLAN_FORMAT_VERSION,
        "seed": p.seed,
        "modes": [
            {
                "input_size": m.input_size,
                "output_size": m.output_size,
                "hash_table": m.hash_table.tolist(),
                "sign_table": m.sign_table.tolist(),
            }
            for m in p.modes
        ],
    }
    return json.dumps(doc)


def load_plan(text: str) -> SketchPlan:
    """Parse save_plan output back into an identical SketchPlan."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise PlanFormatError(f"line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise PlanFormatError("top-level value must be an object")
    if doc.get("version") != PLAN_FORMAT_VERSION:
        raise PlanFormatError(f"unsupported plan version {doc.get('version')!r}")
    if not isinstance(doc.get("seed"), int):
        raise PlanFormatError("seed must be an integer")
    raw_modes = doc.get("modes")
    if not isinstance(raw_modes, list) or not raw_modes:
        raise PlanFormatError("modes must be a nonempty list")
    modes = []
    for i, raw in enumerate(raw_modes):
        if not isinstance(raw, dict):
            raise PlanFormatError(f"mode {i} must be an object")
        try:
            modes.append(
                ModeHash(
                    raw["input_size"],
                    raw["output_size"],
                    raw["hash_table"],
                    raw["sign_table"],
                )
            )
        except KeyError as e:
            raise PlanFormatError(f"mode {i} is missing field {e.args[0]!r}") from e
        except ValueError as e:
            raise PlanFormatError(f"mode {i}: {e}") from e
    return SketchPlan(tuple(modes), doc["seed"])


# Seed-token conventions shared by the pooling operators and their oracles.
# Deriving plans here (and only here) keeps fast paths and oracles on
# identical tables without sharing any computation.

def paired_vector_plans(nx: int, ny: int, d: int, seed: int) -> tuple[SketchPlan, SketchPlan]:
    """Independent per-input plans for a bilinear pair, from one seed."""
    return (
        build_plan([nx], [d], derive_seed(seed, "x")),
        build_plan([ny], [d], derive_seed(seed, "y")),
    )


def image_text_plans(
    image_dims: Sequence[int], text_len: int, output_dims: Sequence[int], seed: int
) -> tuple[SketchPlan, SketchPlan]:
    """Order-3 image plan onto (d1, d2, d3) plus text vector plan onto d4."""
    out = [int(d) for d in output_dims]
    if len(out) != 4:
        raise ValueError(f"need four output dims, got {out}")
    return (
        build_plan(image_dims, out[:3], derive_seed(seed, "img")),
        build_plan([text_len], [out[3]], derive_seed(seed, "txt")),
    )


def repeated_vector_plans(n: int, d: int, count: int, seed: int) -> tuple[SketchPlan, ...]:
    """Independent plans for repeated sketching of one vector (factor r = 1..count)."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    return tuple(build_plan([n], [d], derive_seed(seed, "x", r)) for r in range(1, count + 1))
