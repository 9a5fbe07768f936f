"""Simulation and analysis steps shared by the CLI and the tests."""

import logging
import time

import numpy as np

from .dataset import PositionRecord, StateRecord, header_for
from .diffraction import FREE_SPACE, QuadratureSpec, field_grid
from .ensemble import microstates, nominal_pose, state_offsets, uniform_weights
from .imaging import attenuation_db, attenuation_stack, mean_map, std_map

log = logging.getLogger(__name__)


def simulate(scene, positions=("p1", "p2", "p3"), quad=None, threads=None):
    """Free-space grid plus the 36 micro-movement grids of each nominal position.

    Returns ``(header, grids)`` ready for :func:`bodyblock.dataset.write_dataset`.
    """
    quad = quad or QuadratureSpec.default(scene.wavelength)
    lam = scene.wavelength
    records = [PositionRecord(i + 1, label, *_pose_tuple(nominal_pose(label))) for i, label in enumerate(positions)]
    states = [StateRecord(0, 0, 0.0, 0.0, 0.0)]
    grids = [field_grid(scene, FREE_SPACE)]
    for rec, label in zip(records, positions):
        nominal = nominal_pose(label)
        for pose, (dx, dy, rot) in zip(microstates(nominal, lam), state_offsets(nominal, lam)):
            sid = len(states)
            t0 = time.perf_counter()
            grids.append(field_grid(scene, pose, quad, threads=threads, state_id=f"state{sid}"))
            log.info("state %d (%s dx=%+.4f dy=%+.4f rot=%g) in %.2fs", sid, label, dx, dy, rot, time.perf_counter() - t0)
            states.append(StateRecord(sid, rec.position_id, dx, dy, rot))
    return header_for(scene, records, states), grids


def _pose_tuple(pose):
    return pose.x, pose.y, pose.theta


def position_stack(header, grids, label, surface=0):
    """Attenuation stack (states, rows, cols) and uniform weights for one position."""
    idx = header.state_indices(label)
    stack = attenuation_stack([grids[i] for i in idx], grids[0], surface=surface)
    return stack, uniform_weights(len(idx))


def image_maps(header, grids, label, surface=0):
    stack, w = position_stack(header, grids, label, surface)
    mean = mean_map(stack, w)
    return mean, std_map(stack, mean, w)


def line_array_samples(header, grids, label, selection):
    """Attenuation samples (states, surfaces) along one line array."""
    ref = grids[0].samples.ravel()[selection.indices]
    rows = [attenuation_db(grids[i].samples.ravel()[selection.indices], ref) for i in header.state_indices(label)]
    return np.array(rows)
