"""Attenuation maps: per-state loss, ensemble mean and standard deviation.

All averaging happens on dB values, so the mean map is the probability
weighted mean of the per-state losses -10 log10 |E / E0|^2.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import BadWeights, DimsMismatch, ZeroReference, ZeroStates

ATTENUATION_CAP_DB = 150.0


class MapKind(enum.Enum):
    SINGLE = "single-state"
    MEAN = "mean"
    STD = "std"


@dataclass
class AttenuationMap:
    values: np.ndarray  # (rows, cols) dB
    kind: MapKind = MapKind.SINGLE

    @property
    def dims(self):
        return self.values.shape


def attenuation_db(E, E0):
    """Loss of ``E`` relative to the free-space reference ``E0`` in dB.

    Works on scalars and arrays.  A zero field maps to the 150 dB cap.
    """
    E = np.asarray(E, dtype=np.complex128)
    E0 = np.asarray(E0, dtype=np.complex128)
    mag0 = np.abs(E0)
    if np.any(mag0 == 0):
        raise ZeroReference("free-space reference field is zero")
    mag = np.abs(E)
    with np.errstate(divide="ignore"):
        att = -20.0 * np.log10(mag / mag0)
    att = np.where(mag == 0, ATTENUATION_CAP_DB, np.minimum(att, ATTENUATION_CAP_DB))
    return float(att) if att.ndim == 0 else att


def _stack(att_stack):
    if isinstance(att_stack, np.ndarray):
        stack = np.asarray(att_stack, dtype=float)
    else:
        maps = list(att_stack)
        if not maps:
            raise ZeroStates("empty attenuation stack")
        shapes = {np.shape(getattr(m, "values", m)) for m in maps}
        if len(shapes) != 1:
            raise DimsMismatch(f"maps have differing dims: {sorted(shapes)}")
        stack = np.stack([np.asarray(getattr(m, "values", m), dtype=float) for m in maps])
    if stack.ndim != 3 or stack.shape[0] == 0:
        raise DimsMismatch(f"expected a (states, rows, cols) stack, got shape {stack.shape}")
    return stack


def _weights(weights, n):
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise BadWeights(f"{w.size} weights for {n} states")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
        raise BadWeights("weights must be non-negative and sum to 1")
    return w


def mean_map(att_stack, weights):
    stack = _stack(att_stack)
    w = _weights(weights, stack.shape[0])
    # summing deviations from state 0 keeps a constant stack exactly constant
    ref = stack[0]
    return AttenuationMap(ref + np.tensordot(w, stack - ref, axes=1), MapKind.MEAN)


def std_map(att_stack, mean, weights):
    stack = _stack(att_stack)
    w = _weights(weights, stack.shape[0])
    mu = np.asarray(getattr(mean, "values", mean), dtype=float)
    if mu.shape != stack.shape[1:]:
        raise DimsMismatch(f"mean map {mu.shape} does not match stack {stack.shape[1:]}")
    var = np.tensordot(w, (stack - mu) ** 2, axes=1)
    return AttenuationMap(np.sqrt(var), MapKind.STD)


def attenuation_stack(grids, free_grid, surface=0):
    """(states, rows, cols) loss stack for one surface of a list of FieldGrids."""
    ref = free_grid.samples[surface]
    out = []
    for g in grids:
        if g.samples.shape != free_grid.samples.shape:
            raise DimsMismatch(f"grid {g.state_id} has dims {g.samples.shape}, expected {free_grid.samples.shape}")
        out.append(attenuation_db(g.samples[surface], ref))
    return np.stack(out)


def footprint_centroid(att_map, col_y):
    """Attenuation-weighted mean y of the positive-loss footprint."""
    values = np.clip(np.asarray(getattr(att_map, "values", att_map), dtype=float), 0.0, None)
    profile = values.sum(axis=0)
    total = profile.sum()
    if total == 0:
        return 0.0
    return float(np.dot(profile, col_y) / total)
