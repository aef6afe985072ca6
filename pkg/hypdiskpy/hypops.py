"""
Differential operators of the hyperbolic derivative at a point.

Every operator is computed from one jet (phi, phi', phi'', phi''') of the map at
the point; ``evaluate`` returns all of them together as a ``HypPoint``.

Conventions: D = (1-|z|^2) phi' / (1-|phi|^2), A = (1-|z|^2) d log|D| / dz, and
the hyperbolic distance uses the density 1/(1-|z|^2), so d(0, r) = artanh(r).
"""

import math
from typing import List, Optional, Tuple, Union

import numpy as np

from hypdiskpy.config import CURVATURE_A_FLOOR, PHI_PRIME_ZERO
from hypdiskpy.exception import (
    HypDiskEvaluationError,
    HypDiskNumericError,
    HypDiskUndefinedError,
    HypDiskZeroDerivativeError,
)
from hypdiskpy.expr import Node, eval_jet
from hypdiskpy.jet import Jet3
from hypdiskpy.log import log_debug
from hypdiskpy.model import HypDiskModel, ValueFlag
from hypdiskpy.util import polar_grid

AValue = Union[complex, ValueFlag]


class HypPoint(HypDiskModel):
    """
    All operators of phi at one point. A is ``ValueFlag.INFINITE`` exactly when
    phi'(z) = 0; the quantities that divide by phi' are then None.
    """

    z: complex
    phi: complex
    D: complex
    absD: float
    A: AValue
    S: Optional[complex] = None
    grad: Optional[complex] = None
    A_z: Optional[complex] = None
    A_zbar: Optional[complex] = None
    curvature: Optional[float] = None


class OrderEstimate(HypDiskModel):
    # sup |A| over the grid, INFINITE when the grid meets a zero of phi'
    alpha_est: Union[float, ValueFlag]
    # inf |A| over the grid points where A is finite
    mu_est: float
    n_points: int
    n_skipped: int = 0


# --- per-jet helpers, shared by the public operators and ``evaluate``


def _weights(jet: Jet3, z: complex) -> Tuple[float, float]:
    w = 1.0 - abs(z) ** 2
    v = 1.0 - abs(jet.f) ** 2
    if w <= 0.0:
        raise HypDiskEvaluationError("point outside the open unit disk", z)
    if v <= 0.0:
        raise HypDiskEvaluationError(f"|phi(z)| = {abs(jet.f)!r} is not below 1", z)
    return w, v


def _phi_prime_vanishes(jet: Jet3) -> bool:
    return abs(jet.d1) <= PHI_PRIME_ZERO


def _require_phi_prime(jet: Jet3, z: complex, op: str) -> None:
    if _phi_prime_vanishes(jet):
        raise HypDiskZeroDerivativeError(z, op)


def _hyp_derivative(jet: Jet3, z: complex) -> complex:
    w, v = _weights(jet, z)
    return w * jet.d1 / v


def _a_operator(jet: Jet3, z: complex) -> AValue:
    w, v = _weights(jet, z)
    if _phi_prime_vanishes(jet):
        return ValueFlag.INFINITE
    return w * jet.d2 / (2.0 * jet.d1) - z.conjugate() + w * jet.f.conjugate() * jet.d1 / v


def _schwarzian(jet: Jet3) -> complex:
    ratio = jet.d2 / jet.d1
    return jet.d3 / jet.d1 - 1.5 * ratio * ratio


def _finite_parts(jet: Jet3, z: complex, op: str) -> Tuple[float, complex, complex, complex]:
    """
    (1-|z|^2, D, A, S) for operators that need phi'(z) != 0.
    """
    _require_phi_prime(jet, z, op)
    w, _ = _weights(jet, z)
    return w, _hyp_derivative(jet, z), _a_operator(jet, z), _schwarzian(jet)


def _wirtinger(w: float, z: complex, D: complex, A: complex, S: complex) -> Tuple[complex, complex]:
    A_z = (w * w * S / 2.0 + A * A + z.conjugate() * A) / w
    A_zbar = (-z * A + abs(D) ** 2 - 1.0) / w
    return A_z, A_zbar


def _grad(w: float, D: complex, A: complex) -> complex:
    return 2.0 * abs(D) * A.conjugate() / w


def _curvature(w: float, A: complex, S: complex, z: complex) -> float:
    if abs(A) < CURVATURE_A_FLOOR:
        raise HypDiskUndefinedError("curvature is undefined where A vanishes", z)
    return -0.5 * abs(A) * (w * w * S / (A * A)).imag


# --- public operators


def hyp_derivative(phi: Node, z: complex) -> complex:
    z = complex(z)
    return _hyp_derivative(eval_jet(phi, z), z)


def a_operator(phi: Node, z: complex) -> AValue:
    """
    :return: A_phi(z), or ``ValueFlag.INFINITE`` at a zero of phi'
    """
    z = complex(z)
    return _a_operator(eval_jet(phi, z), z)


def schwarzian(phi: Node, z: complex) -> complex:
    z = complex(z)
    jet = eval_jet(phi, z)
    _require_phi_prime(jet, z, "schwarzian")
    return _schwarzian(jet)


def wirtinger_A(phi: Node, z: complex) -> Tuple[complex, complex]:
    """
    :return: (dA/dz, dA/dzbar)
    """
    z = complex(z)
    w, D, A, S = _finite_parts(eval_jet(phi, z), z, "wirtinger_A")
    return _wirtinger(w, z, D, A, S)


def grad_absD(phi: Node, z: complex) -> complex:
    """
    Euclidean gradient of |D_phi| written as a complex number (d/dx + i d/dy).
    """
    z = complex(z)
    w, D, A, _ = _finite_parts(eval_jet(phi, z), z, "grad_absD")
    return _grad(w, D, A)


def hessian_absD(phi: Node, z: complex) -> Tuple[complex, float]:
    """
    :return: (d^2|D|/dz^2, d^2|D|/dz dzbar)
    """
    z = complex(z)
    w, D, A, S = _finite_parts(eval_jet(phi, z), z, "hessian_absD")
    absD = abs(D)
    d2_zz = absD * (w * w * S / 2.0 + 2.0 * A * A + 2.0 * z.conjugate() * A) / (w * w)
    d2_zzbar = absD * (-1.0 + absD * absD + abs(A) ** 2) / (w * w)
    return d2_zz, d2_zzbar


def laplacian_log_absD(phi: Node, z: complex) -> float:
    """
    d^2 log|D| / dz dzbar, which equals -(1-|D|^2)/(1-|z|^2)^2.
    """
    z = complex(z)
    w, D, _, _ = _finite_parts(eval_jet(phi, z), z, "laplacian_log_absD")
    return -(1.0 - abs(D) ** 2) / (w * w)


def curvature(phi: Node, z: complex) -> float:
    """
    Hyperbolic curvature at z of the trajectory through z, oriented by increasing level.
    """
    z = complex(z)
    w, _, A, S = _finite_parts(eval_jet(phi, z), z, "curvature")
    return _curvature(w, A, S, z)


def evaluate(phi: Node, z: complex) -> HypPoint:
    """
    Evaluate every operator at z from a single jet of phi.

    :param phi: expression tree of the map
    :param z: point of the open unit disk
    """
    z = complex(z)
    jet = eval_jet(phi, z)
    D = _hyp_derivative(jet, z)
    A = _a_operator(jet, z)
    point = HypPoint(z=z, phi=jet.f, D=D, absD=abs(D), A=A)
    if A == ValueFlag.INFINITE:
        return point
    w, _ = _weights(jet, z)
    S = _schwarzian(jet)
    point.S = S
    point.grad = _grad(w, D, A)
    point.A_z, point.A_zbar = _wirtinger(w, z, D, A, S)
    if abs(A) >= CURVATURE_A_FLOOR:
        point.curvature = _curvature(w, A, S, z)
    return point


def hyperbolic_distance(z1: complex, z2: complex) -> float:
    """
    artanh |(z1 - z2) / (1 - conj(z2) z1)|, the distance for the density 1/(1-|z|^2).
    """
    z1, z2 = complex(z1), complex(z2)
    ratio = abs((z1 - z2) / (1.0 - z2.conjugate() * z1))
    return math.atanh(min(ratio, 1.0 - 1e-16))


def geometric_curvature(z_prev: complex, z: complex, z_next: complex) -> float:
    """
    Hyperbolic curvature at ``z`` of the circle through three consecutive points
    of a curve, oriented from ``z_prev`` to ``z_next``.
    """
    a, b = z - z_prev, z_next - z
    chord = z_next - z_prev
    denom = abs(a) * abs(b) * abs(chord)
    if denom == 0.0:
        raise ValueError("geometric_curvature needs three distinct points")
    euclidean = 2.0 * (a.conjugate() * b).imag / denom
    tangent = chord / abs(chord)
    return (1.0 - abs(z) ** 2) * euclidean + 2.0 * (z.conjugate() * tangent).imag


def order_grid(grid_density: int) -> List[complex]:
    """
    Polar grid used by ``order_estimates``: radii 0, j/8 (j < 8) and 1 - 1/m^2
    (2 <= m <= grid_density), 4*grid_density angles. Doubling the density gives
    a superset of the points.
    """
    radii = [0.0] + [j / 8.0 for j in range(1, 8)] + [1.0 - 1.0 / (m * m) for m in range(2, grid_density + 1)]
    return polar_grid(sorted(set(radii)), 4 * grid_density)


def order_estimates(phi: Node, grid_density: int) -> OrderEstimate:
    """
    Grid estimates of sup |A| and inf |A| over the disk.

    :param phi: expression tree of the map
    :param grid_density: >= 8; the grid reaches |z| = 1 - 1/grid_density^2
    """
    if grid_density < 8:
        raise ValueError("grid_density must be >= 8")
    points = order_grid(grid_density)
    values: List[float] = []
    infinite = False
    skipped = 0
    for z in points:
        try:
            A = a_operator(phi, z)
        except HypDiskNumericError as e:
            log_debug("order estimate: skipping %r: %s", z, e)
            skipped += 1
            continue
        if A == ValueFlag.INFINITE:
            infinite = True
            continue
        values.append(abs(A))
    arr = np.asarray(values)
    alpha = ValueFlag.INFINITE if infinite else float(arr.max(initial=0.0))
    mu = float(arr.min(initial=math.inf))
    return OrderEstimate(alpha_est=alpha, mu_est=mu, n_points=len(points), n_skipped=skipped)
