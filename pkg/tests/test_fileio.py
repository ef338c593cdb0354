import csv
import struct

import numpy as np
import pytest

from compactpool.fileio import (
    BadMagicError,
    BenchRecord,
    CSV_HEADER,
    DimsOverflowError,
    TensorFileError,
    TruncatedPayloadError,
    UnsupportedVersionError,
    read_tensor,
    write_csv,
    write_tensor,
)
from compactpool.tensor import ComplexTensor, DenseTensor


def test_real_round_trip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    t = DenseTensor.from_array(rng.standard_normal((2, 3, 4)))
    path = tmp_path / "t.tsk"
    write_tensor(t, path)
    back = read_tensor(path)
    assert isinstance(back, DenseTensor)
    assert back.dims == t.dims
    assert back.values.tobytes() == t.values.tobytes()


def test_signed_zero_survives(tmp_path):
    t = DenseTensor.vector([0.0, -0.0, 1.0])
    path = tmp_path / "z.tsk"
    write_tensor(t, path)
    back = read_tensor(path)
    assert not np.signbit(back.values[0])
    assert np.signbit(back.values[1])


def test_complex_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    t = ComplexTensor.from_array(rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2)))
    path = tmp_path / "c.tsk"
    write_tensor(t, path)
    back = read_tensor(path)
    assert isinstance(back, ComplexTensor)
    assert back.dims == t.dims
    assert back.values.tobytes() == t.values.tobytes()


def test_scalar_round_trip(tmp_path):
    t = DenseTensor.scalar(-7.25)
    path = tmp_path / "s.tsk"
    write_tensor(t, path)
    back = read_tensor(path)
    assert back.dims == ()
    assert back.values.tolist() == [-7.25]


def test_write_is_reproducible(tmp_path):
    t = DenseTensor.from_array(np.random.default_rng(2).standard_normal((4, 4)))
    p1, p2 = tmp_path / "a.tsk", tmp_path / "b.tsk"
    write_tensor(t, p1)
    write_tensor(t, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_bad_magic(tmp_path):
    path = tmp_path / "bad.tsk"
    good = tmp_path / "good.tsk"
    write_tensor(DenseTensor.vector([1.0]), good)
    path.write_bytes(b"XXXX" + good.read_bytes()[4:])
    with pytest.raises(BadMagicError):
        read_tensor(path)


def test_version_mismatch(tmp_path):
    path = tmp_path / "v.tsk"
    good = tmp_path / "good.tsk"
    write_tensor(DenseTensor.vector([1.0]), good)
    raw = bytearray(good.read_bytes())
    raw[4] = 2
    path.write_bytes(bytes(raw))
    with pytest.raises(UnsupportedVersionError):
        read_tensor(path)


def test_payload_shorter_than_dims_declare(tmp_path):
    # header says dims (2, 2) but only 3 values follow
    path = tmp_path / "short.tsk"
    header = struct.pack("<4sBBBB", b"TSK1", 1, 2, 0, 0)
    dims = struct.pack("<QQ", 2, 2)
    payload = struct.pack("<3d", 1.0, 2.0, 3.0)
    path.write_bytes(header + dims + payload)
    with pytest.raises(TruncatedPayloadError):
        read_tensor(path)


def test_trailing_garbage_rejected(tmp_path):
    path = tmp_path / "long.tsk"
    write_tensor(DenseTensor.vector([1.0, 2.0]), path)
    path.write_bytes(path.read_bytes() + b"\x00")
    with pytest.raises(TruncatedPayloadError):
        read_tensor(path)


def test_header_too_short(tmp_path):
    path = tmp_path / "stub.tsk"
    path.write_bytes(b"TSK")
    with pytest.raises(TruncatedPayloadError):
        read_tensor(path)


def test_dims_overflow(tmp_path):
    path = tmp_path / "huge.tsk"
    header = struct.pack("<4sBBBB", b"TSK1", 1, 2, 0, 0)
    dims = struct.pack("<QQ", 2**40, 2**40)
    path.write_bytes(header + dims)
    with pytest.raises(DimsOverflowError):
        read_tensor(path)


def test_unknown_dtype(tmp_path):
    path = tmp_path / "dt.tsk"
    header = struct.pack("<4sBBBB", b"TSK1", 1, 0, 7, 0)
    path.write_bytes(header + struct.pack("<d", 1.0))
    with pytest.raises(TensorFileError):
        read_tensor(path)


def test_csv_empty_records(tmp_path):
    path = tmp_path / "empty.csv"
    write_csv([], path)
    lines = path.read_text().splitlines()
    assert lines == [",".join(CSV_HEADER)]


def test_csv_single_record_parses(tmp_path):
    path = tmp_path / "one.csv"
    rec = BenchRecord(method="mcb", d=16, trial=0, seed=1, metric="rel_err_inner",
                      value=1.0 / 3.0, n1=512, n2=512)
    write_csv([rec], path)
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    row = rows[0]
    assert row["method"] == "mcb"
    assert row["n1"] == "512"
    assert row["C"] == ""
    assert row["value"] == "0.33333333333333331"  # 17 significant digits
    assert float(row["value"]) == pytest.approx(1.0 / 3.0)


def test_csv_many_records_line_count(tmp_path):
    path = tmp_path / "many.csv"
    records = [
        BenchRecord(method="poly", d=8, trial=i, seed=i, metric="runtime_ns", value=float(i), n1=4)
        for i in range(1000)
    ]
    write_csv(records, path)
    assert len(path.read_text().splitlines()) == 1001


def test_bench_record_validates():
    with pytest.raises(ValueError):
        BenchRecord(method="other", d=1, trial=0, seed=0, metric="bytes", value=0)
    with pytest.raises(ValueError):
        BenchRecord(method="mcb", d=1, trial=0, seed=0, metric="speed", value=0)
