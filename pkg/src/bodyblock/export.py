"""Text and image exports of attenuation maps and histograms."""

import numpy as np


def write_map_csv(path, values):
    """Row-major CSV with 6 significant digits."""
    values = np.atleast_2d(np.asarray(values, dtype=float))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for row in values:
            fh.write(",".join(f"{v:.6g}" for v in row))
            fh.write("\n")


def read_map_csv(path):
    return np.loadtxt(path, delimiter=",", ndmin=2)


def to_uint16(values):
    """Linear map min -> 0, max -> 65535; returns ``(image, vmin, vmax)``."""
    v = np.asarray(values, dtype=float)
    vmin, vmax = float(v.min()), float(v.max())
    if vmax == vmin:
        return np.zeros(v.shape, dtype=np.uint16), vmin, vmax
    scaled = np.rint((v - vmin) / (vmax - vmin) * 65535.0)
    return scaled.astype(np.uint16), vmin, vmax


def write_map_pgm(path, values, sidecar=None):
    """Binary 16-bit PGM (P5, big-endian samples) plus a min/max sidecar file.

    Row 0 of ``values`` (lowest z) is written as the bottom image line.
    """
    img, vmin, vmax = to_uint16(values)
    img = img[::-1]
    rows, cols = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n65535\n".encode("ascii"))
        fh.write(img.astype(">u2").tobytes())
    sidecar = sidecar or f"{path}.range.txt"
    with open(sidecar, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"min_db = {vmin:.17g}\nmax_db = {vmax:.17g}\n")
    return sidecar


def read_pgm(path):
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    cols, rows = (int(v) for v in parts[1].split())
    img = np.frombuffer(parts[3], dtype=">u2").reshape(rows, cols)
    return img[::-1].astype(np.uint16)


def write_pmf_csv(fh, hist):
    fh.write("bin_left,bin_right,probability\n")
    for left, right, p in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.probabilities):
        fh.write(f"{left:.6g},{right:.6g},{p:.6g}\n")
