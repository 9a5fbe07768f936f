import struct

import numpy as np
import pytest

from bodyblock.dataset import (
    DatasetHeader,
    PositionRecord,
    StateRecord,
    file_size,
    header_for,
    parse_header,
    read_dataset,
    write_dataset,
)
from bodyblock.diffraction import FieldGrid
from bodyblock.errors import BadMagic, DatasetError, DimsMismatch, Truncated, UnsupportedVersion
from bodyblock.geometry import ArrayManifold, build_scene


def small(rng, dims=(1, 2, 2), n_states=3):
    sc = build_scene()
    sc = sc.with_manifold(ArrayManifold(*dims, sc.manifold.spacing, sc.standoff_d))
    pos = [PositionRecord(1, "p1", 2.0, 0.0, 0.0)]
    states = [StateRecord(0, 0, 0.0, 0.0, 0.0)] + [StateRecord(i, 1, 0.01 * i, -0.02, 45.0 * i) for i in range(1, n_states)]
    header = header_for(sc, pos, states)
    grids = [FieldGrid(dims, rng.normal(size=dims) + 1j * rng.normal(size=dims)) for _ in states]
    return header, grids


def test_round_trip_bit_exact(tmp_path, rng):
    header, grids = small(rng)
    grids[1].samples[0, 0, 0] = complex(np.nan, -0.0)
    path = tmp_path / "d.blk"
    write_dataset(path, header, grids)
    h2, g2 = read_dataset(path)
    assert h2 == header
    for a, b in zip(grids, g2):
        assert a.samples.tobytes() == b.samples.tobytes()
    path2 = tmp_path / "e.blk"
    write_dataset(path2, h2, g2)
    assert path.read_bytes() == path2.read_bytes()


def test_layout(tmp_path, rng):
    header, grids = small(rng)
    path = tmp_path / "d.blk"
    write_dataset(path, header, grids)
    raw = path.read_bytes()
    assert raw[:4] == b"BLKF"
    assert struct.unpack_from("<I", raw, 4)[0] == 1
    assert struct.unpack_from("<d", raw, 8)[0] == 2.4868e9
    assert struct.unpack_from("<3I", raw, 24) == (1, 2, 2)
    body = struct.unpack_from("<6d", raw, 44)
    assert body == (1.8, 0.52, 0.32, 60.0, 0.242, 1040.0)
    # the sample block is the raw little-endian (re, im) stream
    tail = np.frombuffer(raw[-4 * 16:], dtype="<f8")
    np.testing.assert_array_equal(tail[0::2], grids[-1].samples.ravel().real)
    np.testing.assert_array_equal(tail[1::2], grids[-1].samples.ravel().imag)
    assert len(raw) == file_size(header)


def test_wrong_dims(tmp_path, rng):
    header, grids = small(rng)
    grids[2] = FieldGrid((1, 2, 3), np.zeros((1, 2, 3)))
    with pytest.raises(DimsMismatch):
        write_dataset(tmp_path / "d.blk", header, grids)
    with pytest.raises(DimsMismatch):
        write_dataset(tmp_path / "d.blk", header, grids[:2])


def test_default_scenario_size():
    sc = build_scene()
    states = [StateRecord(i, int(i > 0), 0.0, 0.0, 0.0) for i in range(37)]
    header = header_for(sc, [PositionRecord(1, "p1", 2.0, 0.0, 0.0)], states)
    assert header.samples_per_state == 810000
    assert file_size(header) == len(header.to_bytes()) + 37 * 810000 * 16


def test_bad_magic(tmp_path, rng):
    header, grids = small(rng)
    path = tmp_path / "d.blk"
    write_dataset(path, header, grids)
    raw = bytearray(path.read_bytes())
    raw[0:4] = b"BLKX"
    path.write_bytes(bytes(raw))
    with pytest.raises(BadMagic):
        read_dataset(path)


def test_unsupported_version(tmp_path, rng):
    header, grids = small(rng)
    path = tmp_path / "d.blk"
    write_dataset(path, header, grids)
    raw = bytearray(path.read_bytes())
    struct.pack_into("<I", raw, 4, 2)
    path.write_bytes(bytes(raw))
    with pytest.raises(UnsupportedVersion):
        read_dataset(path)


def test_truncated_samples(tmp_path, rng):
    header, grids = small(rng)
    path = tmp_path / "d.blk"
    write_dataset(path, header, grids)
    raw = path.read_bytes()
    path.write_bytes(raw[:-5])
    with pytest.raises(Truncated) as info:
        read_dataset(path)
    assert info.value.offset == len(raw) - 5


def test_truncated_header(rng):
    header, _ = small(rng)
    raw = header.to_bytes()
    for cut in (2, 30, len(raw) - 1):
        with pytest.raises(Truncated) as info:
            parse_header(raw[:cut])
        assert info.value.offset == cut


def test_trailing_bytes(tmp_path, rng):
    header, grids = small(rng)
    path = tmp_path / "d.blk"
    write_dataset(path, header, grids)
    path.write_bytes(path.read_bytes() + b"\0")
    with pytest.raises(DatasetError):
        read_dataset(path)


def test_header_echoes_frequency(tmp_path, rng):
    header, grids = small(rng)
    write_dataset(tmp_path / "d.blk", header, grids)
    h, _ = read_dataset(tmp_path / "d.blk")
    assert h.frequency_hz == 2.4868e9
    assert h.scene().manifold == build_scene().manifold.restricted(1, 2, 2)


def test_missing_file(tmp_path):
    with pytest.raises(DatasetError):
        read_dataset(tmp_path / "absent.blk")


def test_state_lookup(rng):
    header, _ = small(rng, n_states=4)
    assert header.state_indices("p1") == [1, 2, 3]
    assert isinstance(header, DatasetHeader)
