"""Line-oriented ``key = value`` scenario files."""

from .errors import InvalidValue, UnknownKey
from .geometry import CONFIG_KEYS

DEFAULT_CONFIG_TEXT = """\
# reference scenario: vertical Hertzian dipole, absorbing elliptical-cylinder body
frequency_hz = 2.4868e9
standoff_d = 4.0
n_surfaces = 50
n_rows = 180
n_cols = 90
spacing_over_lambda = 0.1
body.kind = elliptical_cylinder
body.height = 1.80
body.width = 0.52
body.thickness = 0.32
body.rel_permittivity = 60
body.loss_tangent = 0.242
body.mass_density = 1040.0
"""


def parse_config(text):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidValue(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UnknownKey(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise InvalidValue(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
