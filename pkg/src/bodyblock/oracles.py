"""Closed-form reference solutions used to validate the numerical solvers."""

import math

import numpy as np
from scipy.special import fresnel, hankel2, jv


def cylinder_series_scattered(radius, source, points, k, n_terms=40, center=(0.0, 0.0)):
    """Scattered TMz field of a PEC circular cylinder lit by a line source.

    Incident field H0^(2)(k|rho - rho_s|) (exp(+jwt) convention).  Valid for
    observation radii larger than ``radius``; uses orders -n_terms..n_terms:

        E_s = -sum_n J_n(ka) H_n^(2)(k rho_s) / H_n^(2)(ka) * H_n^(2)(k rho) * exp(j n (phi - phi_s))
    """
    c = np.asarray(center, dtype=float)
    s = np.asarray(source, dtype=float) - c
    p = np.asarray(points, dtype=float).reshape(-1, 2) - c
    rho_s = math.hypot(s[0], s[1])
    phi_s = math.atan2(s[1], s[0])
    rho = np.hypot(p[:, 0], p[:, 1])
    phi = np.arctan2(p[:, 1], p[:, 0])
    ka = k * radius
    out = np.zeros(rho.shape, dtype=np.complex128)
    for n in range(-n_terms, n_terms + 1):
        coeff = jv(n, ka) * hankel2(n, k * rho_s) / hankel2(n, ka)
        out -= coeff * hankel2(n, k * rho) * np.exp(1j * n * (phi - phi_s))
    return out


def knife_edge_gain(v):
    """Complex field ratio E/E0 behind a half-plane for Fresnel parameter ``v``.

    v > 0 is the shadow side; v = 0 gives exactly 1/2 (6.02 dB).
    """
    S, C = fresnel(np.asarray(v, dtype=float))
    return (1 + 1j) / 2 * ((0.5 - C) - 1j * (0.5 - S))


def knife_edge_loss_db(v):
    return -20.0 * np.log10(np.abs(knife_edge_gain(v)))


def fresnel_parameter(h, d1, d2, wavelength):
    """Fresnel-Kirchhoff parameter for edge height ``h`` above the LOS."""
    return h * math.sqrt(2.0 * (d1 + d2) / (wavelength * d1 * d2))
