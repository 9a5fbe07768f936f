"""Body-blockage field simulation and attenuation imaging over dense receiver arrays."""

__version__ = "0.1.0"
