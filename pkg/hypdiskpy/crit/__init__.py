"""
Critical points of |D_phi|: zeros of A_phi and zeros of phi'.

A zeros are found by damped Newton on the real 2x2 system built from the
Wirtinger derivatives of A; phi' zeros by plain complex Newton on phi'. Each
point is classified by comparing (1-|z|^2)^2 |S_phi| with 2(1-|D_phi|^2).
"""

import math
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from hypdiskpy.config import (
    BOUNDARY_MARGIN,
    CLASS_TOL,
    CRITICAL_GRID_DENSITY,
    CRITICAL_RESIDUAL,
    CSV_FLOAT_FORMAT,
    NEWTON_MAX_ITER,
    NEWTON_TOL,
    PHI_PRIME_EXCLUSION,
    ROOT_DEDUP,
)
from hypdiskpy.exception import HypDiskNotCriticalError, HypDiskNumericError
from hypdiskpy.expr import Node, eval_jet
from hypdiskpy.hypops import evaluate, hessian_absD
from hypdiskpy.log import log_debug, log_info
from hypdiskpy.model import HypDiskModel, ResultList, ValueFlag
from hypdiskpy.util import cartesian_grid, dedup_points

CRITICAL_COLUMNS = ["kind", "re_z", "im_z", "lhs", "rhs", "classification", "branch_angles"]

# a root must also be a fixed point of the iteration, not a slow drift to the boundary
_NEWTON_STEP_TOL = 1e-10
_MAX_HALVINGS = 6
_BRANCH_SAMPLES = 720
_MIN_BRANCH_RADIUS = 1e-5


class CriticalKind(str, Enum):
    A_ZERO = "A_zero"
    PHI_PRIME_ZERO = "phi_prime_zero"


class Classification(str, Enum):
    STRICT_LOCAL_MAX = "strict_local_max"
    SADDLE = "saddle"
    DEGENERATE = "degenerate"
    LOCAL_MIN = "local_min"


class CriticalPoint(HypDiskModel):
    z: complex
    kind: CriticalKind
    # (1-|z|^2)^2 |S(z)|, None at zeros of phi'
    lhs: Optional[float] = None
    # 2(1-|D(z)|^2)
    rhs: float
    classification: Classification
    absD: float
    # saddles only
    branch_angles: List[float] = []
    gamma: Optional[float] = None


class BranchCheck(HypDiskModel):
    crossing_count: int
    measured_angles: List[float]


def _grid_starts(grid_density: int) -> List[complex]:
    if grid_density < 8:
        raise ValueError("grid_density must be >= 8")
    radius = 1.0 - 1.0 / grid_density
    return [complex(z) for z in cartesian_grid(grid_density, radius).ravel() if abs(z) <= radius]


def _excluded(z: complex, exclude: Sequence[complex]) -> bool:
    return any(abs(z - w) < PHI_PRIME_EXCLUSION for w in exclude)


def _newton_A(phi: Node, z: complex, newton_tol: float, exclude: Sequence[complex]) -> Optional[complex]:
    """
    Damped Newton for A(z) = 0 from one start; None when the start is dropped.
    The complex step d solves A_z d + A_zbar conj(d) = -A, written as a real
    2x2 system and solved by least squares (A may vanish along a curve).
    """
    point = evaluate(phi, z)
    if point.A == ValueFlag.INFINITE:
        return None
    for _ in range(NEWTON_MAX_ITER):
        col_x = point.A_z + point.A_zbar
        col_y = 1j * (point.A_z - point.A_zbar)
        jac = np.array([[col_x.real, col_y.real], [col_x.imag, col_y.imag]])
        rhs = np.array([-point.A.real, -point.A.imag])
        (dx, dy), *_ = np.linalg.lstsq(jac, rhs, rcond=None)
        delta = complex(dx, dy)
        if abs(point.A) < newton_tol and abs(delta) < _NEWTON_STEP_TOL:
            return point.z
        lam = 1.0
        improved = None
        for _ in range(_MAX_HALVINGS + 1):
            candidate_z = point.z + lam * delta
            lam *= 0.5
            if abs(candidate_z) >= 1.0 - BOUNDARY_MARGIN or _excluded(candidate_z, exclude):
                continue
            try:
                candidate = evaluate(phi, candidate_z)
            except HypDiskNumericError:
                continue
            if candidate.A == ValueFlag.INFINITE:
                return None
            if abs(candidate.A) < abs(point.A) or (abs(candidate.A) < newton_tol and abs(point.A) < newton_tol):
                improved = candidate
                break
        if improved is None:
            return None
        point = improved
    return None


def refine_A_zero(phi: Node, z: complex, newton_tol: float = NEWTON_TOL) -> Optional[complex]:
    """
    Damped Newton for A(z) = 0 from a single start; None when it does not converge.
    """
    try:
        return _newton_A(phi, complex(z), newton_tol, ())
    except HypDiskNumericError as e:
        log_debug("A Newton from %r failed: %s", z, e)
        return None


def _newton_phi_prime(phi: Node, z: complex, newton_tol: float) -> Optional[complex]:
    jet = eval_jet(phi, z)
    for _ in range(NEWTON_MAX_ITER):
        if jet.d2 == 0:
            return None
        delta = -jet.d1 / jet.d2
        if abs(jet.d1) < newton_tol and abs(delta) < _NEWTON_STEP_TOL:
            return z
        lam = 1.0
        improved = None
        for _ in range(_MAX_HALVINGS + 1):
            candidate_z = z + lam * delta
            lam *= 0.5
            if abs(candidate_z) >= 1.0 - BOUNDARY_MARGIN:
                continue
            try:
                candidate = eval_jet(phi, candidate_z)
            except HypDiskNumericError:
                continue
            if abs(candidate.d1) < abs(jet.d1) or abs(candidate.d1) < newton_tol:
                improved = (candidate_z, candidate)
                break
        if improved is None:
            return None
        z, jet = improved
    return None


def _sorted_points(points: List[CriticalPoint]) -> List[CriticalPoint]:
    return sorted(points, key=lambda p: (p.kind.value, round(p.z.real, 12), round(p.z.imag, 12)))


def find_phi_prime_zeros(
    phi: Node, grid_density: int = CRITICAL_GRID_DENSITY, newton_tol: float = NEWTON_TOL
) -> ResultList[CriticalPoint]:
    """
    Zeros of phi' reached by Newton from the grid; each is a local minimum of |D_phi|.
    """
    roots: List[complex] = []
    for start in _grid_starts(grid_density):
        try:
            root = _newton_phi_prime(phi, start, newton_tol)
        except HypDiskNumericError as e:
            log_debug("phi' Newton: dropping start %r: %s", start, e)
            continue
        if root is not None:
            roots.append(root)
    points = [classify(phi, z) for z in dedup_points(roots, ROOT_DEDUP)]
    return ResultList(_sorted_points(points))


def find_A_zeros(
    phi: Node,
    grid_density: int = CRITICAL_GRID_DENSITY,
    newton_tol: float = NEWTON_TOL,
    exclude: Sequence[complex] = (),
    class_tol: float = CLASS_TOL,
) -> ResultList[CriticalPoint]:
    """
    Zeros of A_phi reached by damped Newton from the grid, classified.

    :param exclude: zeros of phi'; starts and iterates within 1e-4 of them are dropped
    """
    roots: List[complex] = []
    dropped = 0
    for start in _grid_starts(grid_density):
        if _excluded(start, exclude):
            continue
        try:
            root = _newton_A(phi, start, newton_tol, exclude)
        except HypDiskNumericError as e:
            log_debug("A Newton: dropping start %r: %s", start, e)
            root = None
        if root is None:
            dropped += 1
            continue
        roots.append(root)
    log_debug("A Newton: %d roots, %d starts dropped", len(roots), dropped)
    points = [classify(phi, z, class_tol) for z in dedup_points(roots, ROOT_DEDUP)]
    return ResultList(_sorted_points(points))


def _branch_angles(gamma: float, a: float, b: float) -> List[float]:
    beta = math.acos(b / a)
    angles = []
    for sign in (1.0, -1.0):
        theta = (sign * beta - gamma) / 2.0
        angles.append(theta % (2.0 * math.pi))
        angles.append((theta + math.pi) % (2.0 * math.pi))
    return sorted(angles)


def classify(phi: Node, z0: complex, class_tol: float = CLASS_TOL) -> CriticalPoint:
    """
    Classify a critical point of |D_phi| by comparing lhs = (1-|z0|^2)^2 |S(z0)|
    with rhs = 2(1-|D(z0)|^2): lhs < rhs is a strict local maximum, lhs > rhs a
    saddle with four level branches, equality (within class_tol * rhs) degenerate.
    A zero of phi' is a local minimum.

    :raises HypDiskNotCriticalError: neither A nor phi' is small at z0
    """
    z0 = complex(z0)
    jet = eval_jet(phi, z0)
    w = 1.0 - abs(z0) ** 2
    if abs(jet.d1) < CRITICAL_RESIDUAL:
        absD = w * abs(jet.d1) / (1.0 - abs(jet.f) ** 2)
        return CriticalPoint(
            z=z0,
            kind=CriticalKind.PHI_PRIME_ZERO,
            rhs=2.0 * (1.0 - absD * absD),
            classification=Classification.LOCAL_MIN,
            absD=absD,
        )
    point = evaluate(phi, z0)
    if abs(point.A) >= CRITICAL_RESIDUAL:
        raise HypDiskNotCriticalError(f"|A| = {abs(point.A):.3g} is not below {CRITICAL_RESIDUAL}", z0)
    lhs = w * w * abs(point.S)
    rhs = 2.0 * (1.0 - point.absD ** 2)
    band = class_tol * rhs
    if lhs > rhs + band:
        gamma = math.atan2(point.S.imag, point.S.real)
        return CriticalPoint(
            z=z0,
            kind=CriticalKind.A_ZERO,
            lhs=lhs,
            rhs=rhs,
            classification=Classification.SADDLE,
            absD=point.absD,
            branch_angles=_branch_angles(gamma, lhs / 2.0, rhs / 2.0),
            gamma=gamma,
        )
    classification = Classification.STRICT_LOCAL_MAX if lhs < rhs - band else Classification.DEGENERATE
    return CriticalPoint(z=z0, kind=CriticalKind.A_ZERO, lhs=lhs, rhs=rhs, classification=classification, absD=point.absD)


def critical_points(
    phi: Node,
    grid_density: int = CRITICAL_GRID_DENSITY,
    newton_tol: float = NEWTON_TOL,
    class_tol: float = CLASS_TOL,
) -> ResultList[CriticalPoint]:
    """
    Zeros of phi' followed by zeros of A (away from the former), all classified.
    """
    minima = find_phi_prime_zeros(phi, grid_density, newton_tol)
    a_zeros = find_A_zeros(phi, grid_density, newton_tol, exclude=[p.z for p in minima], class_tol=class_tol)
    log_info("critical points: %d zeros of phi', %d zeros of A", len(minima), len(a_zeros))
    return ResultList(list(minima) + list(a_zeros))


def local_expansion(phi: Node, z0: complex, z: complex) -> float:
    """
    Second-order Taylor model of |D_phi| around z0 evaluated at z:
    |D| + 2 Re(|D| A/(1-|z0|^2) d) + Re(D_zz d^2) + D_zzbar |d|^2 with d = z - z0.
    """
    z0, z = complex(z0), complex(z)
    point = evaluate(phi, z0)
    if point.A == ValueFlag.INFINITE:
        raise HypDiskNotCriticalError("expansion needs phi'(z0) != 0", z0)
    d2_zz, d2_zzbar = hessian_absD(phi, z0)
    d = z - z0
    w = 1.0 - abs(z0) ** 2
    first = 2.0 * (point.absD * point.A / w * d).real
    return point.absD + first + (d2_zz * d * d).real + d2_zzbar * abs(d) ** 2


def saddle_branch_check(phi: Node, cp: CriticalPoint, radius: float, n_samples: int = _BRANCH_SAMPLES) -> BranchCheck:
    """
    Sample |D_phi| - |D_phi(cp.z)| on the circle of given radius around a saddle and
    locate its sign changes by linear interpolation.
    """
    if cp.classification != Classification.SADDLE:
        raise HypDiskNotCriticalError(f"branch check needs a saddle, got {cp.classification.value}", cp.z)
    if radius < _MIN_BRANCH_RADIUS:
        raise HypDiskNotCriticalError(f"radius {radius} is below the noise floor {_MIN_BRANCH_RADIUS}", cp.z)
    if abs(cp.z) + radius >= 1.0:
        raise HypDiskNotCriticalError(f"circle of radius {radius} leaves the disk", cp.z)
    t0 = evaluate(phi, cp.z).absD
    angles = 2.0 * np.pi * np.arange(n_samples) / n_samples
    values = np.array([evaluate(phi, cp.z + radius * complex(np.cos(a), np.sin(a))).absD - t0 for a in angles])
    crossings: List[float] = []
    for k in range(n_samples):
        v, w = values[k], values[(k + 1) % n_samples]
        if v == 0.0:
            crossings.append(float(angles[k]))
        elif v * w < 0.0:
            frac = v / (v - w)
            crossings.append(float((angles[k] + frac * 2.0 * np.pi / n_samples) % (2.0 * np.pi)))
    return BranchCheck(crossing_count=len(crossings), measured_angles=sorted(crossings))


def _format_angles(angles: List[float]) -> str:
    return ";".join(CSV_FLOAT_FORMAT % a for a in angles)


def critical_frame(points: Sequence[CriticalPoint]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "kind": [p.kind.value for p in points],
            "re_z": [p.z.real for p in points],
            "im_z": [p.z.imag for p in points],
            "lhs": [p.lhs if p.lhs is not None else math.nan for p in points],
            "rhs": [p.rhs for p in points],
            "classification": [p.classification.value for p in points],
            "branch_angles": [_format_angles(p.branch_angles) for p in points],
        },
        columns=CRITICAL_COLUMNS,
    )


def write_critical_report(points: Sequence[CriticalPoint], path: str) -> None:
    """
    One line per point: kind,re_z,im_z,lhs,rhs,classification,branch_angles
    (angles separated by ';').
    """
    critical_frame(points).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def read_critical_report(path: str) -> List[Tuple[CriticalKind, complex, Classification]]:
    df = pd.read_csv(path, float_precision="round_trip")
    missing = [col for col in CRITICAL_COLUMNS if col not in df.columns]
    if missing:
        raise ValueError(f"{path}: not a critical-point report, missing columns {missing}")
    return [
        (CriticalKind(row.kind), complex(row.re_z, row.im_z), Classification(row.classification))
        for row in df.itertuples(index=False)
    ]


class CriticalClient(object):
    """
    Critical-point operations bound to one map.
    """

    def __init__(self, phi: Node):
        self._phi = phi

    def phi_prime_zeros(
        self, grid_density: int = CRITICAL_GRID_DENSITY, newton_tol: float = NEWTON_TOL
    ) -> ResultList[CriticalPoint]:
        return find_phi_prime_zeros(self._phi, grid_density, newton_tol)

    def A_zeros(
        self,
        grid_density: int = CRITICAL_GRID_DENSITY,
        newton_tol: float = NEWTON_TOL,
        exclude: Sequence[complex] = (),
        class_tol: float = CLASS_TOL,
    ) -> ResultList[CriticalPoint]:
        return find_A_zeros(self._phi, grid_density, newton_tol, exclude, class_tol)

    def classify(self, z0: complex, class_tol: float = CLASS_TOL) -> CriticalPoint:
        return classify(self._phi, z0, class_tol)

    def all(
        self, grid_density: int = CRITICAL_GRID_DENSITY, newton_tol: float = NEWTON_TOL, class_tol: float = CLASS_TOL
    ) -> ResultList[CriticalPoint]:
        return critical_points(self._phi, grid_density, newton_tol, class_tol)

    def expansion(self, z0: complex, z: complex) -> float:
        return local_expansion(self._phi, z0, z)

    def branch_check(self, cp: CriticalPoint, radius: float, n_samples: int = _BRANCH_SAMPLES) -> BranchCheck:
        return saddle_branch_check(self._phi, cp, radius, n_samples)
