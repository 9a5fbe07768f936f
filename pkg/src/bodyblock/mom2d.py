"""Two-dimensional method-of-moments solver for TMz scattering by PEC cylinders.

Electric-field integral equation with pulse basis functions on straight
segments and point matching at the segment midpoints.  The excitation is an
electric line source with unit-normalised incident field

    E_inc(rho) = H0^(2)(k |rho - rho_s|)

(time convention exp(+jwt)).  The scattered field radiated by the surface
current J is

    E_s(rho) = -(k eta / 4) * sum_n J_n * Int_n H0^(2)(k |rho - rho'|) dl'

and the EFIE enforces E_inc + E_s = 0 at every match point.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import hankel2

from .errors import LengthMismatch, PointOnContour, SingularMatrix, TooCoarse
from .fields import ETA0

EULER_GAMMA = 0.5772156649015329
# self term: Int_{-L/2}^{L/2} H0^(2)(k|t|) dt ~ L * [1 - j (2/pi) (ln(gamma_e k L / 4) - 1)],
# gamma_e = exp(Euler's constant) = 1.781072418...
GAMMA_E = math.exp(EULER_GAMMA)

MIN_SEGMENTS_PER_WAVELENGTH = 10
MIN_SEGMENTS = 48
PERIMETER_RTOL = 1e-3

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(4)


@dataclass(frozen=True)
class Circle:
    radius: float
    center: tuple = (0.0, 0.0)


@dataclass(frozen=True)
class Ellipse:
    """Ellipse with semi-axis ``a`` along x and ``b`` along y before rotation."""

    a: float
    b: float
    center: tuple = (0.0, 0.0)
    rotation_deg: float = 0.0


@dataclass(frozen=True)
class Contour:
    nodes: np.ndarray  # (n, 2), closed polyline: segment i runs nodes[i] -> nodes[i+1 mod n]
    midpoints: np.ndarray
    lengths: np.ndarray
    tangents: np.ndarray

    @property
    def n(self):
        return self.lengths.size

    @property
    def perimeter(self):
        return float(self.lengths.sum())


@dataclass(frozen=True)
class ImpedanceSystem:
    matrix: np.ndarray
    excitation: np.ndarray


def _as_ellipse(shape):
    if isinstance(shape, Circle):
        return Ellipse(shape.radius, shape.radius, shape.center, 0.0)
    return shape


def ellipse_perimeter(a, b):
    from scipy.special import ellipe

    a, b = max(a, b), min(a, b)
    return 4.0 * a * ellipe(1.0 - (b / a) ** 2)


def _contour_from_nodes(nodes):
    ends = np.roll(nodes, -1, axis=0)
    seg = ends - nodes
    lengths = np.hypot(seg[:, 0], seg[:, 1])
    return Contour(nodes, 0.5 * (nodes + ends), lengths, seg / lengths[:, None])


def _ellipse_nodes(a, b, n):
    if a == b:
        t = 2.0 * math.pi * np.arange(n) / n
    else:
        # equal arc-length nodes by inverting a dense cumulative arc length
        dense = np.linspace(0.0, 2.0 * math.pi, 64 * n + 1)
        speed = np.hypot(a * np.sin(dense), b * np.cos(dense))
        arc = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(dense))])
        t = np.interp(arc[-1] * np.arange(n) / n, arc, dense)
    return np.stack([a * np.cos(t), b * np.sin(t)], axis=1)


def discretize_contour(shape, segments_per_wavelength, k):
    """Closed polygon approximating a circle or ellipse.

    Uses ``ceil(perimeter * segments_per_wavelength / lambda)`` segments, more
    if needed to keep the polygon perimeter within 0.1% of the true one.
    """
    if segments_per_wavelength < MIN_SEGMENTS_PER_WAVELENGTH:
        raise TooCoarse(
            f"{segments_per_wavelength} segments per wavelength; need at least {MIN_SEGMENTS_PER_WAVELENGTH}"
        )
    ell = _as_ellipse(shape)
    lam = 2.0 * math.pi / k
    perimeter = ellipse_perimeter(ell.a, ell.b)
    n = max(MIN_SEGMENTS, math.ceil(perimeter * segments_per_wavelength / lam - 1e-9))
    while True:
        local = _ellipse_nodes(ell.a, ell.b, n)
        contour = _contour_from_nodes(local)
        if abs(contour.perimeter - perimeter) <= PERIMETER_RTOL * perimeter:
            break
        n = math.ceil(n * 1.25)
    rot = math.radians(ell.rotation_deg)
    c, s = math.cos(rot), math.sin(rot)
    nodes = local @ np.array([[c, s], [-s, c]]) + np.asarray(ell.center, dtype=float)
    return _contour_from_nodes(nodes)


def line_source_field(source, points, k):
    pts = np.asarray(points, dtype=float)
    d = np.hypot(pts[..., 0] - source[0], pts[..., 1] - source[1])
    return hankel2(0, k * d)


def _segment_integrals(contour, points, k):
    """G[m, n] = Int_segment_n H0^(2)(k |p_m - rho'|) dl' by 4-point Gauss-Legendre."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    half = 0.5 * contour.lengths
    G = np.zeros((pts.shape[0], contour.n), dtype=np.complex128)
    for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
        q = contour.midpoints + (node * half)[:, None] * contour.tangents
        d = np.hypot(pts[:, None, 0] - q[None, :, 0], pts[:, None, 1] - q[None, :, 1])
        G += weight * half[None, :] * hankel2(0, k * d)
    return G


def impedance_system(contour, source, k):
    G = _segment_integrals(contour, contour.midpoints, k)
    L = contour.lengths
    self_terms = L * (1.0 - 1j * (2.0 / math.pi) * (np.log(GAMMA_E * k * L / 4.0) - 1.0))
    G[np.diag_indices_from(G)] = self_terms
    Z = (k * ETA0 / 4.0) * G
    V = line_source_field(source, contour.midpoints, k)
    return ImpedanceSystem(Z, V)


def _inside(contour, point):
    # even-odd ray casting on the polygon
    x, y = point
    xs, ys = contour.nodes[:, 0], contour.nodes[:, 1]
    xe, ye = np.roll(xs, -1), np.roll(ys, -1)
    crosses = (ys > y) != (ye > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = xs + (y - ys) * (xe - xs) / (ye - ys)
    return bool(np.count_nonzero(crosses & (x < xint)) % 2)


def assemble_and_solve(contour, source, k, max_condition=1e12):
    """Surface current density on each segment for a line source at ``source``.

    Raises :class:`SingularMatrix` near interior-resonance frequencies, where
    the EFIE operator becomes ill conditioned; perturb ``k`` slightly.
    """
    source = np.asarray(source, dtype=float)
    if _inside(contour, source):
        raise ValueError("line source lies inside the contour")
    system = impedance_system(contour, source, k)
    cond = np.linalg.cond(system.matrix)
    if not np.isfinite(cond) or cond > max_condition:
        raise SingularMatrix(
            f"impedance matrix condition number {cond:.3g}; k={k:.6g} is likely an "
            "interior resonance, perturb k slightly"
        )
    return scipy.linalg.solve(system.matrix, system.excitation)


def residual(contour, currents, source, k):
    """Relative EFIE residual ||Z J - V|| / ||V||."""
    system = impedance_system(contour, np.asarray(source, dtype=float), k)
    r = system.matrix @ currents - system.excitation
    return float(np.linalg.norm(r) / np.linalg.norm(system.excitation))


def _distance_to_segments(contour, pts):
    a = contour.nodes
    t = contour.tangents
    rel = pts[:, None, :] - a[None, :, :]
    s = np.clip(np.einsum("mnk,nk->mn", rel, t), 0.0, contour.lengths[None, :])
    closest = a[None, :, :] + s[..., None] * t[None, :, :]
    return np.min(np.hypot(*(pts[:, None, :] - closest).transpose(2, 0, 1)), axis=1)


def scattered_field_2d(contour, currents, points, k):
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    G = _segment_integrals(contour, pts, k)
    return -(k * ETA0 / 4.0) * (G @ currents)


def total_field_2d(contour, currents, point, source, k):
    """Incident plus scattered field at one point or an (N, 2) array of points."""
    pts = np.asarray(point, dtype=float)
    single = pts.ndim == 1
    pts = pts.reshape(-1, 2)
    tol = 1e-9 * float(contour.lengths.min())
    if np.any(_distance_to_segments(contour, pts) <= tol):
        raise PointOnContour("field point lies on the contour")
    total = line_source_field(source, pts, k) + scattered_field_2d(contour, currents, pts, k)
    return complex(total[0]) if single else total


def body_contour(body, pose, segments_per_wavelength, k):
    """Horizontal (z = 0) cross-section of the elliptical body at ``pose``."""
    shape = Ellipse(
        a=body.thickness / 2.0,
        b=body.width / 2.0,
        center=(pose.x, pose.y),
        rotation_deg=pose.theta,
    )
    return discretize_contour(shape, segments_per_wavelength, k)


def transverse_slice_db(scene, pose, ys, x=None, segments_per_wavelength=20):
    """Attenuation (dB) along y at range ``x`` for the 2D PEC body cross-section.

    The 3D dipole becomes a z-directed line source at the scene's source
    position, which is the TMz analogue of the vertical dipole.
    """
    k = scene.k
    x = scene.manifold.first_surface_x if x is None else x
    src = np.array(scene.source.position[:2])
    contour = body_contour(scene.body, pose, segments_per_wavelength, k)
    currents = assemble_and_solve(contour, src, k)
    pts = np.stack([np.full(len(ys), x), np.asarray(ys, dtype=float)], axis=1)
    total = total_field_2d(contour, currents, pts, src, k)
    return -20.0 * np.log10(np.abs(total / line_source_field(src, pts, k)))


@dataclass(frozen=True)
class ShadowReport:
    peak_offset_cells: int
    mean_abs_diff_db: float


def _peak_cells(values, tie_db):
    return np.flatnonzero(values >= values.max() - tie_db)


def shadow_profile_compare(mom_slice, diffraction_slice, tie_db=1e-6):
    """Compare where two attenuation slices peak.

    Cells within ``tie_db`` of a slice's maximum all count as its peak, so
    mirror-symmetric twin maxima do not depend on round-off.  The offset is
    the smallest index distance between the two peak sets.
    """
    a = np.asarray(mom_slice, dtype=float)
    b = np.asarray(diffraction_slice, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise LengthMismatch(f"slice shapes differ: {a.shape} vs {b.shape}")
    pa = _peak_cells(a, tie_db)
    pb = _peak_cells(b, tie_db)
    offset = int(np.min(np.abs(pa[:, None] - pb[None, :])))
    return ShadowReport(offset, float(np.mean(np.abs(a - b))))
