"""Scene description: source, receiver manifold, body model, poses and silhouettes.

Coordinate frame: origin at the source, x along the line of sight towards the
receivers, z vertical.  The source and the body centre share the same height,
so both sit at z = 0.
"""

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidValue, ManifoldTooSmall, MissingKey, UnknownKey, WrongBodyKind
from .fields import wavelength

DEFAULT_FREQUENCY_HZ = 2.4868e9
DEFAULT_STANDOFF_M = 4.0
DEFAULT_DIMS = (50, 180, 90)  # surfaces along x, rows along z, cols along y
DEFAULT_SPACING_OVER_LAMBDA = 0.1
DEFAULT_SOURCE_HEIGHT_M = 0.99  # above the floor; the frame origin sits at this height


class BodyKind(enum.Enum):
    ELLIPTICAL_CYLINDER = "elliptical_cylinder"
    RECTANGULAR_SCREEN = "rectangular_screen"


@dataclass(frozen=True)
class BodyMaterial:
    """Dielectric description kept as dataset metadata (muscle tissue by default)."""

    rel_permittivity: float = 60.0
    loss_tangent: float = 0.242
    mass_density: float = 1040.0

    def __post_init__(self):
        for name in ("rel_permittivity", "loss_tangent", "mass_density"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InvalidValue(f"material {name} must be positive, got {value!r}")


@dataclass(frozen=True)
class BodyModel:
    """Body blockage model.

    ``width`` is the major transverse size, ``thickness`` the minor one.  A
    rectangular screen ignores ``thickness`` and may have zero width, which is
    only useful for validation runs.
    """

    kind: BodyKind = BodyKind.ELLIPTICAL_CYLINDER
    height: float = 1.80
    width: float = 0.52
    thickness: float = 0.32
    material: BodyMaterial = field(default_factory=BodyMaterial)

    def __post_init__(self):
        if not (self.height > 0 and math.isfinite(self.height)):
            raise InvalidValue(f"body height must be positive, got {self.height!r}")
        if self.kind is BodyKind.ELLIPTICAL_CYLINDER:
            if not (self.thickness > 0):
                raise InvalidValue(f"body thickness must be positive, got {self.thickness!r}")
            if not (self.width >= self.thickness):
                raise InvalidValue("body width must be >= thickness for an elliptical cylinder")
        else:
            if not (self.width >= 0 and self.thickness >= 0):
                raise InvalidValue("screen width and thickness must be non-negative")
        if not (math.isfinite(self.width) and math.isfinite(self.thickness)):
            raise InvalidValue("body dimensions must be finite")


@dataclass(frozen=True)
class DipoleSource:
    position: tuple = (0.0, 0.0, 0.0)
    axis: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        pos = tuple(float(v) for v in self.position)
        axis = tuple(float(v) for v in self.axis)
        if len(pos) != 3 or len(axis) != 3:
            raise InvalidValue("source position and axis must be 3-vectors")
        if abs(math.sqrt(sum(a * a for a in axis)) - 1.0) > 1e-12:
            raise InvalidValue(f"dipole axis must be a unit vector, got {axis}")
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "axis", axis)


@dataclass(frozen=True)
class ArrayManifold:
    n_surfaces: int
    n_rows: int
    n_cols: int
    spacing: float
    first_surface_x: float

    def __post_init__(self):
        for name in ("n_surfaces", "n_rows", "n_cols"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise InvalidValue(f"{name} must be an integer >= 1, got {value!r}")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise InvalidValue(f"spacing must be positive, got {self.spacing!r}")

    @property
    def dims(self):
        return (self.n_surfaces, self.n_rows, self.n_cols)

    @property
    def size(self):
        return self.n_surfaces * self.n_rows * self.n_cols

    def surface_x(self):
        return self.first_surface_x + np.arange(self.n_surfaces) * self.spacing

    def row_z(self):
        return (np.arange(self.n_rows) - (self.n_rows - 1) / 2.0) * self.spacing

    def col_y(self):
        return (np.arange(self.n_cols) - (self.n_cols - 1) / 2.0) * self.spacing

    def restricted(self, n_surfaces=None, n_rows=None, n_cols=None):
        """Smaller manifold sharing the same spacing and first surface.

        Rows and columns stay centred on the line of sight, so the result is a
        sub-block of the original grid whenever the counts keep their parity.
        """
        return replace(
            self,
            n_surfaces=n_surfaces or self.n_surfaces,
            n_rows=n_rows or self.n_rows,
            n_cols=n_cols or self.n_cols,
        )


@dataclass(frozen=True)
class Pose:
    """Planar body position (m) and heading (degrees); z is always 0."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.theta)):
            raise InvalidValue(f"pose components must be finite: {self}")


@dataclass(frozen=True)
class SilhouetteRect:
    """Axis-aligned rectangle in the vertical plane x = plane_x."""

    y_min: float
    y_max: float
    z_min: float
    z_max: float
    plane_x: float

    @property
    def width(self):
        return self.y_max - self.y_min

    @property
    def height(self):
        return self.z_max - self.z_min

    @property
    def area(self):
        return self.width * self.height


@dataclass(frozen=True)
class Scene:
    frequency_hz: float
    source: DipoleSource
    body: BodyModel
    manifold: ArrayManifold
    standoff_d: float

    def __post_init__(self):
        wavelength(self.frequency_hz)  # validates
        if not (self.standoff_d > 0):
            raise InvalidValue(f"standoff_d must be positive, got {self.standoff_d!r}")
        expected = self.source.position[0] + self.standoff_d
        if abs(self.manifold.first_surface_x - expected) > 1e-12 * max(1.0, abs(expected)):
            raise InvalidValue("manifold.first_surface_x must equal source x + standoff_d")

    @property
    def wavelength(self):
        return wavelength(self.frequency_hz)

    @property
    def k(self):
        return 2.0 * math.pi / self.wavelength

    def with_manifold(self, manifold):
        return replace(self, manifold=manifold)


_INT_KEYS = ("n_surfaces", "n_rows", "n_cols")
_FLOAT_KEYS = ("frequency_hz", "standoff_d", "spacing_over_lambda")
_BODY_FLOAT_KEYS = (
    "body.height",
    "body.width",
    "body.thickness",
    "body.rel_permittivity",
    "body.loss_tangent",
    "body.mass_density",
)
CONFIG_KEYS = _FLOAT_KEYS + _INT_KEYS + ("body.kind",) + _BODY_FLOAT_KEYS


def _as_float(key, value):
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise InvalidValue(f"{key}: expected a number, got {value!r}") from None
    if not math.isfinite(out):
        raise InvalidValue(f"{key}: value must be finite")
    return out


def _as_int(key, value):
    if isinstance(value, str):
        value = value.strip()
        try:
            return int(value)
        except ValueError:
            raise InvalidValue(f"{key}: expected an integer, got {value!r}") from None
    if isinstance(value, float) and not value.is_integer():
        raise InvalidValue(f"{key}: expected an integer, got {value!r}")
    return int(value)


def build_scene(config=None):
    """Validated :class:`Scene` from a flat key/value mapping.

    Omitted keys fall back to the reference scenario (2.4868 GHz dipole,
    4 m standoff, 50 x 180 x 90 manifold at lambda/10, 1.80 x 0.52 x 0.32 m
    absorbing elliptical cylinder).  A rectangular screen has no reference
    dimensions, so ``body.width`` and ``body.height`` become mandatory.
    """
    config = dict(config or {})
    unknown = sorted(set(config) - set(CONFIG_KEYS))
    if unknown:
        raise UnknownKey(f"unknown config key(s): {', '.join(unknown)}")
    for key, value in config.items():
        if isinstance(value, str) and not value.strip():
            raise MissingKey(f"{key}: empty value")

    freq = _as_float("frequency_hz", config.get("frequency_hz", DEFAULT_FREQUENCY_HZ))
    if freq <= 0:
        raise InvalidValue("frequency_hz must be positive")
    standoff = _as_float("standoff_d", config.get("standoff_d", DEFAULT_STANDOFF_M))
    spacing_ratio = _as_float(
        "spacing_over_lambda", config.get("spacing_over_lambda", DEFAULT_SPACING_OVER_LAMBDA)
    )
    if standoff <= 0:
        raise InvalidValue("standoff_d must be positive")
    if spacing_ratio <= 0:
        raise InvalidValue("spacing_over_lambda must be positive")
    dims = {}
    for key, default in zip(_INT_KEYS, DEFAULT_DIMS):
        dims[key] = _as_int(key, config.get(key, default))
        if dims[key] < 1:
            raise InvalidValue(f"{key} must be >= 1, got {dims[key]}")

    kind_name = str(config.get("body.kind", BodyKind.ELLIPTICAL_CYLINDER.value)).strip()
    try:
        kind = BodyKind(kind_name)
    except ValueError:
        raise InvalidValue(f"body.kind: unknown body kind {kind_name!r}") from None
    if kind is BodyKind.RECTANGULAR_SCREEN:
        for key in ("body.width", "body.height"):
            if key not in config:
                raise MissingKey(f"{key} is required for a rectangular screen")

    body_defaults = BodyModel()
    mat_defaults = BodyMaterial()
    vals = {}
    for key in _BODY_FLOAT_KEYS:
        attr = key.split(".", 1)[1]
        default = getattr(body_defaults, attr, None)
        if default is None:
            default = getattr(mat_defaults, attr)
        if kind is BodyKind.RECTANGULAR_SCREEN and attr == "thickness":
            default = 0.0
        vals[attr] = _as_float(key, config.get(key, default))

    material = BodyMaterial(vals["rel_permittivity"], vals["loss_tangent"], vals["mass_density"])
    body = BodyModel(kind, vals["height"], vals["width"], vals["thickness"], material)

    lam = wavelength(freq)
    spacing = spacing_ratio * lam
    manifold = ArrayManifold(dims["n_surfaces"], dims["n_rows"], dims["n_cols"], spacing, standoff)

    horizontal = manifold.n_cols * spacing
    vertical = manifold.n_rows * spacing
    if body.width > horizontal or body.height > vertical:
        raise ManifoldTooSmall(
            f"body silhouette {body.width:.4g} x {body.height:.4g} m exceeds the manifold's "
            f"transverse extent {horizontal:.4g} x {vertical:.4g} m"
        )
    return Scene(freq, DipoleSource(), body, manifold, standoff)


def array_points(manifold):
    """All receiver positions as an (N, 3) array in (surface, row, col) order."""
    xs = manifold.surface_x()
    zs = manifold.row_z()
    ys = manifold.col_y()
    X, Z, Y = np.meshgrid(xs, zs, ys, indexing="ij")
    return np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)


def projected_width(body, theta):
    """Width of the elliptical cross-section projected on the y axis.

    ``theta`` is the heading in degrees; 0 puts the major axis across the LOS.
    """
    if body.kind is not BodyKind.ELLIPTICAL_CYLINDER:
        raise WrongBodyKind("projected_width is defined for elliptical bodies only")
    a = body.width / 2.0
    b = body.thickness / 2.0
    t = math.radians(theta)
    return 2.0 * math.sqrt((a * math.cos(t)) ** 2 + (b * math.sin(t)) ** 2)


def silhouette(body, pose):
    if body.kind is BodyKind.ELLIPTICAL_CYLINDER:
        half_w = projected_width(body, pose.theta) / 2.0
    else:
        half_w = body.width / 2.0
    half_h = body.height / 2.0
    return SilhouetteRect(pose.y - half_w, pose.y + half_w, -half_h, half_h, pose.x)
