"""Body-state ensembles: nominal positions and their micro-movements."""

from dataclasses import dataclass

import numpy as np

from .errors import BadWeights, InvalidValue, ZeroStates
from .geometry import Pose

ROTATIONS_DEG = (0.0, 45.0, 90.0, 135.0)

NOMINAL_POSITIONS = {
    "p1": Pose(2.0, 0.0, 0.0),
    "p2": Pose(2.0, 0.25, 0.0),
    "p3": Pose(2.0, 0.50, 0.0),
}


def nominal_positions():
    return tuple(NOMINAL_POSITIONS.values())


def nominal_pose(name):
    try:
        return NOMINAL_POSITIONS[name.lower()]
    except KeyError:
        raise InvalidValue(f"unknown nominal position {name!r}; expected one of {sorted(NOMINAL_POSITIONS)}") from None


def translation_offsets(lam):
    step = lam / 4.0
    return [(dx, dy) for dx in (-step, 0.0, step) for dy in (-step, 0.0, step)]


def uniform_weights(n):
    if n < 1:
        raise ZeroStates("an ensemble needs at least one state")
    w = np.full(n, 1.0 / n)
    return w / w.sum()


@dataclass(frozen=True)
class EnsembleSpec:
    nominal: Pose
    translation_offsets: tuple
    rotations: tuple
    weights: np.ndarray

    def __post_init__(self):
        n = len(self.translation_offsets) * len(self.rotations)
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (n,):
            raise BadWeights(f"expected {n} weights, got shape {w.shape}")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise BadWeights("weights must be non-negative and sum to 1")

    @classmethod
    def uniform(cls, nominal, lam):
        offsets = tuple(translation_offsets(lam))
        return cls(nominal, offsets, ROTATIONS_DEG, uniform_weights(len(offsets) * len(ROTATIONS_DEG)))

    def states(self):
        """Poses ordered translation-major, rotation-minor."""
        p = self.nominal
        return [
            Pose(p.x + dx, p.y + dy, p.theta + rot)
            for dx, dy in self.translation_offsets
            for rot in self.rotations
        ]

    def subset(self, indices):
        """Ensemble restricted to the given state indices, weights renormalised."""
        states = self.states()
        idx = list(indices)
        if not idx:
            raise ZeroStates("empty subset")
        w = np.asarray(self.weights, dtype=float)[idx]
        if w.sum() <= 0:
            raise BadWeights("subset carries zero probability")
        return [states[i] for i in idx], w / w.sum()


def microstates(nominal, lam):
    """The 36 micro-movement poses around ``nominal``.

    Translations of -lam/4, 0, +lam/4 along x and y crossed with headings
    0/45/90/135 degrees, translation-major.
    """
    if not (lam > 0):
        raise InvalidValue(f"wavelength must be positive, got {lam!r}")
    return EnsembleSpec.uniform(nominal, lam).states()


def state_offsets(nominal, lam):
    """(dx, dy, dtheta) per microstate, in microstate order."""
    return [(dx, dy, rot) for dx, dy in translation_offsets(lam) for rot in ROTATIONS_DEG]
