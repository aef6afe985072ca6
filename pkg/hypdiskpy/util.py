import math
import re
from typing import List, Sequence

import numpy as np

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL_RE = re.compile(rf"([+-]?{_NUM})")
_IMAG_RE = re.compile(rf"([+-]?)({_NUM})?i")
_FULL_RE = re.compile(rf"([+-]?{_NUM})([+-])({_NUM})?i")


def parse_complex(text: str) -> complex:
    """
    Parse a command-line complex number of the form ``a+bi`` (no spaces).
    ``0.5``, ``-0.2i``, ``i``, ``0.1-0.3i`` and ``1e-3+2e-2i`` are accepted.
    """
    s = text.strip()
    m = _REAL_RE.fullmatch(s)
    if m:
        return complex(float(m.group(1)), 0.0)
    m = _IMAG_RE.fullmatch(s)
    if m:
        magnitude = float(m.group(2)) if m.group(2) else 1.0
        return complex(0.0, -magnitude if m.group(1) == "-" else magnitude)
    m = _FULL_RE.fullmatch(s)
    if m:
        magnitude = float(m.group(3)) if m.group(3) else 1.0
        return complex(float(m.group(1)), -magnitude if m.group(2) == "-" else magnitude)
    raise ValueError(f"invalid complex literal: {text!r}")


def format_real(x: float) -> str:
    # no "-0"
    return "%.17g" % (x + 0.0)


def format_complex(z: complex) -> str:
    imag = z.imag + 0.0
    sign = "-" if math.copysign(1.0, imag) < 0 else "+"
    return f"{format_real(z.real)}{sign}{format_real(abs(imag))}i"


def relative_error(value: complex, reference: complex, floor: float = 1.0) -> float:
    """
    ``|value - reference| / max(|reference|, floor)``; the floor keeps the
    measure finite where the reference vanishes.
    """
    return abs(value - reference) / max(abs(reference), floor)


def random_disk_points(rng: np.random.Generator, n: int, r_max: float = 0.9, r_min: float = 0.0) -> List[complex]:
    """
    ``n`` points uniformly distributed (by area) in the annulus r_min <= |z| < r_max.
    """
    u = rng.uniform(r_min * r_min, r_max * r_max, size=n)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
    pts = np.sqrt(u) * np.exp(1j * theta)
    return [complex(p) for p in pts]


def cartesian_grid(grid_density: int, radius: float) -> np.ndarray:
    """
    Nodes of a (grid_density+1)^2 Cartesian grid over [-radius, radius]^2, as a
    complex array of shape (grid_density+1, grid_density+1), indexed [iy, ix].
    """
    axis = np.linspace(-radius, radius, grid_density + 1)
    xx, yy = np.meshgrid(axis, axis)
    return xx + 1j * yy


def polar_grid(radii: Sequence[float], n_angles: int) -> List[complex]:
    """
    Points r*exp(2*pi*i*k/n_angles) for each radius; the origin appears once if 0 is
    among the radii.
    """
    angles = 2.0 * np.pi * np.arange(n_angles) / n_angles
    points: List[complex] = []
    for r in radii:
        if r == 0.0:
            points.append(0j)
            continue
        points.extend(complex(p) for p in r * np.exp(1j * angles))
    return points


def dedup_points(points: Sequence[complex], tol: float) -> List[complex]:
    """
    Keep the first of every group of points closer than ``tol``; order preserved.
    """
    kept: List[complex] = []
    for p in points:
        if all(abs(p - q) >= tol for q in kept):
            kept.append(p)
    return kept
