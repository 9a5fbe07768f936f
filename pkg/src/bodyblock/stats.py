"""Attenuation statistics for line arrays running along the LOS."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadBinWidth, EmptySamples, InvalidValue, OutOfRange

DEFAULT_BIN_WIDTH_DB = 0.5

# transverse (y, z) positions of the reference line arrays, metres
NAMED_ARRAYS = {
    "A": (0.536, 1.07),
    "B": (0.0, 0.0),
    "C": (-0.536, -1.07),
}


@dataclass(frozen=True)
class LineArraySelection:
    name: str
    fixed_row: int
    fixed_col: int
    y: float  # snapped grid coordinates
    z: float
    indices: np.ndarray  # flat sample indices, one per surface
    along: str = "x"


@dataclass(frozen=True)
class Histogram:
    bin_width: float
    bin_edges: np.ndarray
    probabilities: np.ndarray


@dataclass(frozen=True)
class Summary:
    mean: float
    std: float
    min: float
    max: float
    median: float
    count: int


def select_line_array(manifold, named):
    """Receivers sharing one (row, col) across all surfaces.

    ``named`` is "A", "B", "C" (snapped to the nearest grid cell; ties go to
    the lower index) or an explicit ``(row, col)`` pair.  A named array whose
    nominal coordinates fall outside the surface raises OutOfRange.
    """
    if isinstance(named, str):
        key = named.upper()
        if key not in NAMED_ARRAYS:
            raise InvalidValue(f"unknown line array {named!r}; expected one of {sorted(NAMED_ARRAYS)}")
        y, z = NAMED_ARRAYS[key]
        ys, zs = manifold.col_y(), manifold.row_z()
        # snapping is for the lambda mismatch only, not for a grid that stops short
        half = 0.5 * manifold.spacing
        if abs(y) > ys[-1] + half + 1e-3 or abs(z) > zs[-1] + half + 1e-3:
            raise OutOfRange(
                f"array {key} at (y={y}, z={z}) m lies outside the surface "
                f"(|y| <= {ys[-1]:.4f}, |z| <= {zs[-1]:.4f})"
            )
        col = int(np.argmin(np.abs(ys - y)))
        row = int(np.argmin(np.abs(zs - z)))
        name = key
    else:
        row, col = (int(v) for v in named)
        name = f"r{row}c{col}"
    if not (0 <= row < manifold.n_rows and 0 <= col < manifold.n_cols):
        raise OutOfRange(f"(row={row}, col={col}) outside a {manifold.n_rows} x {manifold.n_cols} surface")
    per_surface = manifold.n_rows * manifold.n_cols
    indices = np.arange(manifold.n_surfaces) * per_surface + row * manifold.n_cols + col
    return LineArraySelection(
        name, row, col, float(manifold.col_y()[col]), float(manifold.row_z()[row]), indices
    )


def pmf(samples, bin_width=DEFAULT_BIN_WIDTH_DB):
    """Probability mass function on left-closed bins anchored at 0 dB."""
    if not (bin_width > 0 and math.isfinite(bin_width)):
        raise BadBinWidth(f"bin width must be positive, got {bin_width!r}")
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise EmptySamples("no samples")
    bins = np.floor(x / bin_width).astype(np.int64)
    lo, hi = bins.min(), bins.max()
    counts = np.bincount(bins - lo, minlength=hi - lo + 1)
    edges = np.arange(lo, hi + 2) * bin_width
    return Histogram(float(bin_width), edges, counts / x.size)


def summary(samples):
    """Unweighted statistics; ``std`` is the population (ddof=0) value."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise EmptySamples("no samples")
    return Summary(
        float(x.mean()), float(x.std()), float(x.min()), float(x.max()), float(np.median(x)), int(x.size)
    )
