"""Scalar-diffraction forward solver for a perfectly absorbing body.

The blocked field is the free-space field minus the Kirchhoff integral over
the body silhouette (Babinet complement of an opaque screen):

    E(P) = E0(P) - (j / lambda) * Int_S E_inc(q) exp(-j k r) / r * (1 + cos chi) / 2 dA

The integral is evaluated with the midpoint rule on a uniform grid covering
the silhouette rectangle exactly.  The step is halved until two successive
levels differ by less than ``tolerance * |E0(P)|``.
"""

import contextlib
import logging
import math
from dataclasses import dataclass

import numba
import numpy as np

from . import _kernels
from .errors import GeometryError, InvalidValue, NoConvergence
from .fields import free_space_grid
from .geometry import array_points, silhouette

log = logging.getLogger(__name__)

# cells per kernel call; bounds memory at high refinement levels
CHUNK_CELLS = 1 << 20

FREE_SPACE = "free"


@dataclass(frozen=True)
class QuadratureSpec:
    initial_step: float
    tolerance: float = 1e-3
    max_refinements: int = 4

    def __post_init__(self):
        if not (self.initial_step > 0 and math.isfinite(self.initial_step)):
            raise InvalidValue(f"initial_step must be positive, got {self.initial_step!r}")
        if not (0 < self.tolerance < 0.1):
            raise InvalidValue(f"tolerance must lie in (0, 0.1), got {self.tolerance!r}")
        if int(self.max_refinements) != self.max_refinements or self.max_refinements < 1:
            raise InvalidValue(f"max_refinements must be an integer >= 1, got {self.max_refinements!r}")

    @classmethod
    def default(cls, wavelength, **kwargs):
        return cls(initial_step=wavelength / 8.0, **kwargs)

    def validate_for(self, wavelength):
        if self.initial_step > wavelength / 8.0 * (1 + 1e-12):
            raise InvalidValue(
                f"initial_step {self.initial_step:.6g} m exceeds lambda/8 = {wavelength / 8:.6g} m"
            )


@dataclass(frozen=True)
class BlockedSample:
    value: complex
    level: int


@dataclass
class FieldGrid:
    """Complex samples for one body state, shaped (surfaces, rows, cols)."""

    dims: tuple
    samples: np.ndarray
    state_id: str = FREE_SPACE
    levels: np.ndarray = None

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.samples = np.asarray(self.samples, dtype=np.complex128).reshape(self.dims)


@contextlib.contextmanager
def _numba_threads(threads):
    if threads is None:
        yield
        return
    previous = numba.get_num_threads()
    numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))
    try:
        yield
    finally:
        numba.set_num_threads(previous)


def _cell_centres(lo, hi, n):
    centre = 0.5 * (lo + hi)
    h = (hi - lo) / n
    # (2i + 1 - n) / 2 is exactly antisymmetric, so a centred rectangle gives a mirror-symmetric grid
    return centre + 0.5 * (2.0 * np.arange(n) + 1.0 - n) * h, h


def _level_weights(source, k, rect, ys, hy, zs, hz):
    Y, Z = np.meshgrid(ys, zs, indexing="ij")
    qy = Y.ravel()
    qz = Z.ravel()
    q = np.stack([np.full(qy.shape, rect.plane_x), qy, qz], axis=1)
    e_inc = free_space_grid(source, q, k)
    lam = 2.0 * math.pi / k
    w = (1j / lam) * hy * hz * e_inc
    return qy, qz, np.ascontiguousarray(w.real), np.ascontiguousarray(w.imag)


def aperture_field(source, k, rect, points, quad, threads=None):
    """Blocked field at ``points`` (N, 3) behind the absorbing rectangle ``rect``.

    Returns ``(values, levels)``: the converged complex fields and the
    refinement level at which each point met the tolerance.
    """
    pts = np.ascontiguousarray(np.asarray(points, dtype=float).reshape(-1, 3))
    quad.validate_for(2.0 * math.pi / k)
    behind = pts[:, 0] > rect.plane_x
    if not np.all(behind):
        bad = int(np.flatnonzero(~behind)[0])
        raise GeometryError(
            f"receiver {bad} at x={pts[bad, 0]:.6g} m is not behind the silhouette plane x={rect.plane_x:.6g} m"
        )
    e0 = free_space_grid(source, pts, k)
    n = pts.shape[0]
    levels = np.zeros(n, dtype=np.int8)
    if not (rect.width > 0 and rect.height > 0):
        return e0, levels

    ny0 = max(1, math.ceil(rect.width / quad.initial_step - 1e-9))
    nz0 = max(1, math.ceil(rect.height / quad.initial_step - 1e-9))
    px, py, pz = (np.ascontiguousarray(pts[:, i]) for i in range(3))
    result = np.empty(n, dtype=np.complex128)
    previous = np.empty(n, dtype=np.complex128)
    active = np.arange(n)

    with _numba_threads(threads):
        for level in range(quad.max_refinements + 1):
            scale = 2**level
            ys, hy = _cell_centres(rect.y_min, rect.y_max, ny0 * scale)
            zs, hz = _cell_centres(rect.z_min, rect.z_max, nz0 * scale)
            rows_per_chunk = max(1, CHUNK_CELLS // ys.size)
            apx, apy, apz = px[active], py[active], pz[active]
            current = np.zeros(active.size, dtype=np.complex128)
            out_re = np.empty(active.size)
            out_im = np.empty(active.size)
            for start in range(0, zs.size, rows_per_chunk):
                qy, qz, w_re, w_im = _level_weights(
                    source, k, rect, ys, hy, zs[start:start + rows_per_chunk], hz
                )
                _kernels.aperture_sum(qy, qz, w_re, w_im, rect.plane_x, apx, apy, apz, k, out_re, out_im)
                current += out_re + 1j * out_im
            if level > 0:
                change = np.abs(current - previous[active])
                done = change < quad.tolerance * np.abs(e0[active])
                finished = active[done]
                result[finished] = e0[finished] - current[done]
                levels[finished] = level
                previous[active] = current
                active = active[~done]
            else:
                previous[:] = current
            log.debug("level %d: %d cells, %d points pending", level, ys.size * zs.size, active.size)
            if active.size == 0:
                return result, levels

    raise NoConvergence(
        f"quadrature did not converge for {active.size} point(s) after "
        f"{quad.max_refinements} refinements (first offending index {int(active[0])})",
        index=int(active[0]),
        level=quad.max_refinements,
    )


def blocked_field(scene, pose, point, quad=None):
    """Field at a single receiver with the body at ``pose``."""
    quad = quad or QuadratureSpec.default(scene.wavelength)
    rect = silhouette(scene.body, pose)
    values, levels = aperture_field(scene.source, scene.k, rect, np.asarray(point, dtype=float), quad)
    return BlockedSample(complex(values[0]), int(levels[0]))


def field_grid(scene, pose=FREE_SPACE, quad=None, threads=None, state_id=None):
    """Field at every manifold point for one body state.

    ``pose=FREE_SPACE`` yields the unblocked reference field.  Values do not
    depend on ``threads``.
    """
    manifold = scene.manifold
    pts = array_points(manifold)
    if pose is FREE_SPACE or pose == FREE_SPACE:
        samples = free_space_grid(scene.source, pts, scene.k)
        levels = np.zeros(pts.shape[0], dtype=np.int8)
        label = state_id or FREE_SPACE
    else:
        quad = quad or QuadratureSpec.default(scene.wavelength)
        rect = silhouette(scene.body, pose)
        samples, levels = aperture_field(scene.source, scene.k, rect, pts, quad, threads=threads)
        label = state_id or f"pose({pose.x:g},{pose.y:g},{pose.theta:g})"
    return FieldGrid(manifold.dims, samples, label, levels.reshape(manifold.dims))
