"""Free-space field of the Hertzian dipole source.

Conventions: time dependence exp(+j*w*t), outgoing waves exp(-j*k*r)/r.
The scalar field is the theta-component of the dipole's electric field for a
unit current moment (I*l = 1 A*m).  Only field ratios are used downstream, so
the normalisation is immaterial but fixed.
"""

import math

import numpy as np

from .errors import InvalidFrequency, SingularPoint

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact
ETA0 = 376.730313668  # free-space impedance, ohm

TIME_CONVENTION = "exp(+jwt)"


def wavelength(frequency_hz):
    """Free-space wavelength in metres for a frequency in Hz."""
    if not (frequency_hz > 0) or not math.isfinite(frequency_hz):
        raise InvalidFrequency(f"frequency must be positive and finite, got {frequency_hz!r}")
    return SPEED_OF_LIGHT / frequency_hz


def wavenumber(frequency_hz):
    return 2.0 * math.pi / wavelength(frequency_hz)


def dipole_field(position, axis, points, k):
    """Vectorised scalar dipole field at ``points`` (shape (..., 3)).

    Includes the radiation, induction and quasi-static terms:

        E = j k eta0 / (4 pi r) * sin(theta) * (1 + 1/(j k r) - 1/(k r)^2) * exp(-j k r)

    where theta is measured from the dipole axis.
    """
    pts = np.asarray(points, dtype=float)
    rvec = pts - np.asarray(position, dtype=float)
    r = np.sqrt(np.sum(rvec * rvec, axis=-1))
    if np.any(r == 0.0):
        raise SingularPoint("field point coincides with the source position")
    cross = np.cross(np.asarray(axis, dtype=float), rvec)
    sin_theta = np.sqrt(np.sum(cross * cross, axis=-1)) / r
    kr = k * r
    radial = 1.0 + 1.0 / (1j * kr) - 1.0 / (kr * kr)
    return (1j * k * ETA0 / (4.0 * math.pi)) * sin_theta * radial * np.exp(-1j * kr) / r


def free_space_field(source, point, k):
    """Field of ``source`` at a single 3-vector ``point`` as a Python complex."""
    return complex(dipole_field(source.position, source.axis, np.asarray(point, dtype=float), k))


def free_space_grid(source, points, k):
    """Free-space field at an (N, 3) array of points."""
    return dipole_field(source.position, source.axis, points, k)
