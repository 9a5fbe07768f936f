"""Binary dataset of complex field samples for a set of body states.

Little-endian layout, no padding::

    magic        4s    b"BLKF"
    version      u32   1
    frequency_hz f64
    standoff_d   f64
    dims         3*u32 (surfaces, rows, cols)
    spacing_m    f64
    body         6*f64 height, width, thickness, rel_permittivity, loss_tangent, mass_density
    body_kind    u8    0 elliptical cylinder, 1 rectangular screen
    n_positions  u32
      position   u32 id (>= 1), 8s label (NUL padded), f64 x, f64 y, f64 theta
    state_count  u32   including the free-space state 0
      state      u32 state_id, u32 position_id (0 = free space), f64 dx, f64 dy, f64 dtheta
    convention   u8    1 = exp(+jwt), fields ~ exp(-jkr)/r
    samples      state_count * surfaces * rows * cols * (f64 re, f64 im),
                 ordered (state, surface, row, col)
"""

import struct
from dataclasses import dataclass

import numpy as np

from .diffraction import FREE_SPACE, FieldGrid
from .errors import BadMagic, DatasetError, DimsMismatch, InvalidValue, Truncated, UnsupportedVersion
from .geometry import ArrayManifold, BodyKind, BodyMaterial, BodyModel, DipoleSource, Scene

MAGIC = b"BLKF"
VERSION = 1
CONVENTION_POSITIVE_JWT = 1

_FIXED = struct.Struct("<4sIdd3Id6dB")
_COUNT = struct.Struct("<I")
_POSITION = struct.Struct("<I8sddd")
_STATE = struct.Struct("<IIddd")
_CONVENTION = struct.Struct("<B")
_BODY_KIND_CODES = {BodyKind.ELLIPTICAL_CYLINDER: 0, BodyKind.RECTANGULAR_SCREEN: 1}
_SAMPLE_DTYPE = np.dtype("<c16")


@dataclass(frozen=True)
class PositionRecord:
    position_id: int
    label: str
    x: float
    y: float
    theta: float


@dataclass(frozen=True)
class StateRecord:
    state_id: int
    position_id: int
    dx: float
    dy: float
    dtheta: float


@dataclass(frozen=True)
class DatasetHeader:
    frequency_hz: float
    standoff_d: float
    dims: tuple
    spacing_m: float
    body: BodyModel
    positions: tuple = ()
    states: tuple = (StateRecord(0, 0, 0.0, 0.0, 0.0),)
    version: int = VERSION
    convention: int = CONVENTION_POSITIVE_JWT

    @property
    def state_count(self):
        return len(self.states)

    @property
    def samples_per_state(self):
        s, r, c = self.dims
        return s * r * c

    def position(self, label):
        for p in self.positions:
            if p.label == label:
                return p
        raise InvalidValue(f"dataset has no nominal position {label!r}; available: {[p.label for p in self.positions]}")

    def state_indices(self, label):
        pid = self.position(label).position_id
        return [i for i, s in enumerate(self.states) if s.position_id == pid]

    def to_bytes(self):
        b = self.body
        m = b.material
        parts = [
            _FIXED.pack(
                MAGIC, self.version, self.frequency_hz, self.standoff_d, *self.dims, self.spacing_m,
                b.height, b.width, b.thickness, m.rel_permittivity, m.loss_tangent, m.mass_density,
                _BODY_KIND_CODES[b.kind],
            ),
            _COUNT.pack(len(self.positions)),
        ]
        for p in self.positions:
            label = p.label.encode("ascii")
            if len(label) > 8:
                raise InvalidValue(f"position label {p.label!r} longer than 8 bytes")
            parts.append(_POSITION.pack(p.position_id, label, p.x, p.y, p.theta))
        parts.append(_COUNT.pack(len(self.states)))
        for s in self.states:
            parts.append(_STATE.pack(s.state_id, s.position_id, s.dx, s.dy, s.dtheta))
        parts.append(_CONVENTION.pack(self.convention))
        return b"".join(parts)

    def scene(self):
        """Scene equivalent to the one that produced the dataset (source at origin)."""
        s, r, c = self.dims
        manifold = ArrayManifold(s, r, c, self.spacing_m, self.standoff_d)
        return Scene(self.frequency_hz, DipoleSource(), self.body, manifold, self.standoff_d)


def header_for(scene, positions=(), states=None):
    """Header for ``scene``; ``states`` defaults to free space only."""
    m = scene.manifold
    return DatasetHeader(
        frequency_hz=scene.frequency_hz,
        standoff_d=scene.standoff_d,
        dims=m.dims,
        spacing_m=m.spacing,
        body=scene.body,
        positions=tuple(positions),
        states=tuple(states) if states is not None else (StateRecord(0, 0, 0.0, 0.0, 0.0),),
    )


def _unpack(fmt, buf, offset, what):
    end = offset + fmt.size
    if end > len(buf):
        raise Truncated(f"file ends inside {what}", offset=len(buf))
    return fmt.unpack_from(buf, offset), end


def parse_header(buf):
    """Decode a header from the start of ``buf``; returns ``(header, size)``."""
    if len(buf) < 4:
        raise Truncated("file ends inside magic", offset=len(buf))
    if bytes(buf[:4]) != MAGIC:
        raise BadMagic(f"bad magic {bytes(buf[:4])!r}, expected {MAGIC!r}")
    if len(buf) >= 8:
        (version,) = struct.unpack_from("<I", buf, 4)
        if version != VERSION:
            raise UnsupportedVersion(f"dataset version {version} not supported (expected {VERSION})")
    fixed, off = _unpack(_FIXED, buf, 0, "fixed header")
    (_, version, freq, standoff, s, r, c, spacing, h, w, t, eps, tand, rho, kind_code) = fixed
    kinds = {v: k for k, v in _BODY_KIND_CODES.items()}
    if kind_code not in kinds:
        raise DatasetError(f"unknown body kind code {kind_code}")
    body = BodyModel(kinds[kind_code], h, w, t, BodyMaterial(eps, tand, rho))

    (n_pos,), off = _unpack(_COUNT, buf, off, "position count")
    positions = []
    for _ in range(n_pos):
        (pid, label, x, y, th), off = _unpack(_POSITION, buf, off, "position table")
        positions.append(PositionRecord(pid, label.rstrip(b"\0").decode("ascii"), x, y, th))
    (n_states,), off = _unpack(_COUNT, buf, off, "state count")
    states = []
    for _ in range(n_states):
        rec, off = _unpack(_STATE, buf, off, "state table")
        states.append(StateRecord(*rec))
    (convention,), off = _unpack(_CONVENTION, buf, off, "convention flag")
    if convention != CONVENTION_POSITIVE_JWT:
        raise DatasetError(f"unsupported time convention flag {convention}")
    if not states or states[0].position_id != 0:
        raise DatasetError("state 0 must be the free-space state")
    header = DatasetHeader(freq, standoff, (s, r, c), spacing, body, tuple(positions), tuple(states), version, convention)
    return header, off


def write_dataset(path, header, grids):
    """Write ``header`` followed by one grid per state (state 0 = free space)."""
    grids = list(grids)
    if len(grids) != header.state_count:
        raise DimsMismatch(f"{len(grids)} grids for {header.state_count} states")
    if header.states[0].position_id != 0:
        raise DimsMismatch("state 0 must be the free-space state")
    dims = tuple(header.dims)
    for i, g in enumerate(grids):
        if tuple(g.samples.shape) != dims:
            raise DimsMismatch(f"grid {i} has dims {tuple(g.samples.shape)}, header says {dims}")
    try:
        with open(path, "wb") as fh:
            fh.write(header.to_bytes())
            for g in grids:
                fh.write(np.ascontiguousarray(g.samples, dtype=_SAMPLE_DTYPE).tobytes())
    except OSError as exc:
        raise DatasetError(f"cannot write {path}: {exc}") from exc


def read_dataset(path):
    """Load a dataset eagerly; returns ``(header, grids)``."""
    try:
        with open(path, "rb") as fh:
            buf = fh.read()
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    header, off = parse_header(buf)
    n = header.samples_per_state
    nbytes = n * _SAMPLE_DTYPE.itemsize
    expected = off + header.state_count * nbytes
    if len(buf) < expected:
        raise Truncated(
            f"sample section truncated: expected {expected} bytes, file has {len(buf)}", offset=len(buf)
        )
    if len(buf) > expected:
        raise DatasetError(f"{len(buf) - expected} trailing bytes after the sample section")
    grids = []
    for i, state in enumerate(header.states):
        start = off + i * nbytes
        samples = np.frombuffer(buf, dtype=_SAMPLE_DTYPE, count=n, offset=start).reshape(header.dims)
        label = FREE_SPACE if state.position_id == 0 else f"state{state.state_id}"
        grids.append(FieldGrid(header.dims, samples.astype(np.complex128), label))
    return header, grids


def file_size(header):
    return len(header.to_bytes()) + header.state_count * header.samples_per_state * _SAMPLE_DTYPE.itemsize

