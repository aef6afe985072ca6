"""
Level sets C(t) = {z : |D_phi(z)| = t} as polylines.

Seeds come from sign changes of |D_phi| - t along the edges of a Cartesian grid;
each seed is continued in both directions by a predictor along the level tangent
i*conj(A)/|A| and a Newton corrector along the gradient of |D_phi|.
"""

import cmath
import math
from collections import defaultdict
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import Field
from scipy import optimize
from scipy.spatial import distance

from hypdiskpy.config import (
    A_VANISHING,
    BOUNDARY_MARGIN,
    CSV_FLOAT_FORMAT,
    LEVEL_CRITICAL_TOL,
    LEVEL_GRID_DENSITY,
    LEVEL_STEP,
    LEVEL_TOL,
    MAX_STEPS,
    MAX_TURN,
    NESTING_END_MARGIN,
    PROJECTION_MAX_ITER,
    ROOT_DEDUP,
    SEED_XTOL,
)
from hypdiskpy.crit import refine_A_zero
from hypdiskpy.exception import HypDiskLevelError, HypDiskNumericError
from hypdiskpy.expr import Node
from hypdiskpy.hypops import HypPoint, evaluate
from hypdiskpy.log import log_debug, log_info, log_warning
from hypdiskpy.model import HypDiskModel, ResultList, ValueFlag
from hypdiskpy.util import cartesian_grid, dedup_points

LEVEL_COLUMNS = ["t", "re_z", "im_z"]

# grow the step back toward nominal below this turning angle
_SMOOTH_TURN = 0.05
# give up on a step below this fraction of the nominal step
_MIN_STEP_FRACTION = 1e-6


class LevelEndReason(str, Enum):
    LOOP_CLOSED = "loop_closed"
    DISK_BOUNDARY = "disk_boundary"
    CRITICAL_POINT = "critical_point"
    STEP_LIMIT = "step_limit"


class LevelOptions(HypDiskModel):
    step: float = Field(default=LEVEL_STEP, gt=0)
    level_tol: float = Field(default=LEVEL_TOL, gt=0)
    max_steps: int = Field(default=MAX_STEPS, gt=0)
    boundary_margin: float = Field(default=BOUNDARY_MARGIN, gt=0, lt=1)
    max_turn: float = Field(default=MAX_TURN, gt=0)


class LevelCurve(HypDiskModel):
    t: float
    vertices: List[complex]
    closed: bool
    # reasons the two ends stopped, (start of the polyline, end of the polyline)
    end_reasons: Tuple[LevelEndReason, LevelEndReason]


def project_to_level(
    phi: Node, z: complex, t: float, level_tol: float = LEVEL_TOL, max_iter: int = PROJECTION_MAX_ITER
) -> complex:
    """
    Newton iteration along the gradient of |D_phi| onto the level |D_phi| = t.

    :raises HypDiskLevelError: no convergence within max_iter, or the iterate
        leaves the disk or reaches a critical point
    """
    z = complex(z)
    for _ in range(max_iter + 1):
        point = evaluate(phi, z)
        residual = point.absD - t
        if abs(residual) <= level_tol:
            return z
        if point.grad is None or point.grad == 0:
            raise HypDiskLevelError("gradient of |D| vanishes", z, t)
        z = z - residual * point.grad / abs(point.grad) ** 2
        if abs(z) >= 1.0:
            raise HypDiskLevelError("projection left the disk", z, t)
    raise HypDiskLevelError("projection did not converge", z, t)


def _level_residual(phi: Node, z: complex, t: float) -> float:
    try:
        return evaluate(phi, z).absD - t
    except HypDiskNumericError:
        return math.nan


def seed_points(phi: Node, t: float, grid_density: int = LEVEL_GRID_DENSITY) -> List[complex]:
    """
    Points of the level t found by bisection on the grid edges where |D_phi| - t
    changes sign. The grid covers [-R, R]^2 with R = 1 - 1/grid_density and only
    nodes with |z| <= R are used.
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {t}")
    radius = 1.0 - 1.0 / grid_density
    grid = cartesian_grid(grid_density, radius)
    values = np.full(grid.shape, np.nan)
    for idx, z in np.ndenumerate(grid):
        if abs(z) <= radius:
            values[idx] = _level_residual(phi, complex(z), t)

    roots: List[complex] = []

    def bisect(z1: complex, z2: complex) -> None:
        def g(s: float) -> float:
            return _level_residual(phi, z1 + s * (z2 - z1), t)

        try:
            s = optimize.brentq(g, 0.0, 1.0, xtol=SEED_XTOL)
        except ValueError as e:
            log_debug("seed bisection failed on [%r, %r]: %s", z1, z2, e)
            return
        roots.append(complex(z1 + s * (z2 - z1)))

    ny, nx = grid.shape
    for iy in range(ny):
        for ix in range(nx):
            v = values[iy, ix]
            if np.isnan(v):
                continue
            for jy, jx in ((iy, ix + 1), (iy + 1, ix)):
                if jy >= ny or jx >= nx:
                    continue
                w = values[jy, jx]
                if np.isnan(w):
                    continue
                if v == 0.0:
                    roots.append(complex(grid[iy, ix]))
                elif v * w < 0.0:
                    bisect(complex(grid[iy, ix]), complex(grid[jy, jx]))
    return dedup_points(roots, ROOT_DEDUP)


def _tangent(point: HypPoint, sign: float) -> complex:
    return sign * 1j * point.A.conjugate() / abs(point.A)


def _critical_ahead(phi: Node, t: float, point: HypPoint, h: float) -> Optional[complex]:
    """
    Zero of A on the level within two steps of ``point``, or None. The linear
    model of A screens the point; Newton confirms the zero.
    """
    if point.A_z is None or abs(point.A) >= 2.0 * h * (abs(point.A_z) + abs(point.A_zbar)):
        return None
    z_crit = refine_A_zero(phi, point.z)
    if z_crit is None or abs(z_crit - point.z) > 2.0 * h:
        return None
    try:
        residual = abs(evaluate(phi, z_crit).absD - t)
    except HypDiskNumericError:
        return None
    return z_crit if residual <= LEVEL_CRITICAL_TOL else None


def _march(
    phi: Node, t: float, seed: HypPoint, sign: float, opts: LevelOptions, close_to: Optional[complex]
) -> Tuple[List[complex], LevelEndReason]:
    """
    Continue the level from ``seed`` in one direction. ``close_to`` is the point
    whose neighbourhood ends the march as a closed loop.
    """
    vertices: List[complex] = []
    point = seed
    h = opts.step
    min_step = opts.step * _MIN_STEP_FRACTION
    arclength = 0.0
    for _ in range(opts.max_steps):
        z_crit = _critical_ahead(phi, t, point, h)
        if z_crit is not None:
            log_debug("level %.6g: critical point %r ahead of %r", t, z_crit, point.z)
            vertices.append(z_crit)
            return vertices, LevelEndReason.CRITICAL_POINT
        tangent = _tangent(point, sign)
        accepted: Optional[HypPoint] = None
        while h >= min_step:
            z_pred = point.z + h * tangent
            if abs(z_pred) >= 1.0:
                h *= 0.5
                continue
            try:
                z_new = project_to_level(phi, z_pred, t, opts.level_tol)
                candidate = evaluate(phi, z_new)
            except HypDiskNumericError:
                h *= 0.5
                continue
            if candidate.A == ValueFlag.INFINITE or abs(candidate.A) < A_VANISHING:
                vertices.append(z_new)
                return vertices, LevelEndReason.CRITICAL_POINT
            turn = abs(cmath.phase(_tangent(candidate, sign) / tangent))
            if turn > opts.max_turn or abs(z_new - point.z) > 2.0 * opts.step:
                h *= 0.5
                continue
            accepted = candidate
            if turn < _SMOOTH_TURN:
                h = min(opts.step, 1.5 * h)
            break
        if accepted is None:
            log_warning("level %.6g: step collapse at %r", t, point.z)
            return vertices, LevelEndReason.STEP_LIMIT
        arclength += abs(accepted.z - point.z)
        point = accepted
        vertices.append(point.z)
        if abs(point.z) > 1.0 - opts.boundary_margin:
            return vertices, LevelEndReason.DISK_BOUNDARY
        if close_to is not None and arclength > 3.0 * opts.step and abs(point.z - close_to) < opts.step:
            return vertices, LevelEndReason.LOOP_CLOSED
    return vertices, LevelEndReason.STEP_LIMIT


def trace_level(phi: Node, t: float, seed: complex, opts: Optional[LevelOptions] = None) -> LevelCurve:
    """
    Trace the component of the level t through ``seed`` in both directions.

    :param phi: expression tree of the map
    :param t: level in (0, 1)
    :param seed: point with | |D_phi(seed)| - t | <= level_tol
    :param opts: continuation options
    """
    opts = opts or LevelOptions()
    seed = complex(seed)
    start = evaluate(phi, seed)
    if start.A == ValueFlag.INFINITE or abs(start.A) < A_VANISHING:
        raise HypDiskLevelError("seed is a critical point", seed, t)
    if abs(start.absD - t) > opts.level_tol:
        raise HypDiskLevelError(f"seed is not on the level (|D| = {start.absD!r})", seed, t)
    forward, reason_plus = _march(phi, t, start, 1.0, opts, close_to=seed)
    if reason_plus == LevelEndReason.LOOP_CLOSED:
        vertices = [seed] + forward
        return LevelCurve(t=t, vertices=vertices, closed=True, end_reasons=(reason_plus, reason_plus))
    backward, reason_minus = _march(phi, t, start, -1.0, opts, close_to=None)
    vertices = list(reversed(backward)) + [seed] + forward
    return LevelCurve(t=t, vertices=vertices, closed=False, end_reasons=(reason_minus, reason_plus))


class _VertexHash(object):
    """
    Spatial hash of traced vertices at resolution step/2.
    """

    def __init__(self, step: float):
        self.step = step
        self.cell = step / 2.0
        self.buckets: Dict[Tuple[int, int], List[complex]] = defaultdict(list)

    def _key(self, z: complex) -> Tuple[int, int]:
        return int(math.floor(z.real / self.cell)), int(math.floor(z.imag / self.cell))

    def add(self, points: List[complex]) -> None:
        for z in points:
            self.buckets[self._key(z)].append(z)

    def near(self, z: complex) -> bool:
        kx, ky = self._key(z)
        for dx in range(-2, 3):
            for dy in range(-2, 3):
                if any(abs(z - w) < self.step for w in self.buckets.get((kx + dx, ky + dy), ())):
                    return True
        return False


def components(
    phi: Node, t: float, grid_density: int = LEVEL_GRID_DENSITY, opts: Optional[LevelOptions] = None
) -> ResultList[LevelCurve]:
    """
    All components of the level t reached from the grid seeds, each traced once.
    """
    opts = opts or LevelOptions()
    seeds = seed_points(phi, t, grid_density)
    traced = _VertexHash(opts.step)
    curves: List[LevelCurve] = []
    for seed in seeds:
        if traced.near(seed):
            continue
        try:
            seed = project_to_level(phi, seed, t, opts.level_tol)
            curve = trace_level(phi, t, seed, opts)
        except HypDiskNumericError as e:
            log_warning("level %.6g: skipping seed %r: %s", t, seed, e)
            continue
        traced.add(curve.vertices)
        curves.append(curve)
    log_info("level %.6g: %d seeds, %d components", t, len(seeds), len(curves))
    return ResultList(curves)


def _as_xy(points: List[complex]) -> np.ndarray:
    return np.array([[z.real, z.imag] for z in points], dtype=float).reshape(-1, 2)


def nesting_gap(
    lower: List[LevelCurve], upper: List[LevelCurve], end_margin: float = NESTING_END_MARGIN
) -> Optional[float]:
    """
    Smallest distance between vertices of two families of level curves.

    Open arcs of different levels may end at a common point of the circle, so
    vertices within ``end_margin`` of any open end are left out. None when no
    pair of curves keeps vertices.
    """
    ends = _as_xy([z for c in list(lower) + list(upper) if not c.closed for z in (c.vertices[0], c.vertices[-1])])

    def interior(curve: LevelCurve) -> np.ndarray:
        xy = _as_xy(curve.vertices)
        if len(ends) == 0:
            return xy
        return xy[distance.cdist(xy, ends).min(axis=1) > end_margin]

    gaps = []
    for a in map(interior, lower):
        for b in map(interior, upper):
            if len(a) and len(b):
                gaps.append(float(distance.cdist(a, b).min()))
    return min(gaps) if gaps else None


def write_level_csv(curve: LevelCurve, path: str) -> str:
    """
    Write the vertices to ``path`` and the closed flag and end reasons to the
    ``path + ".meta"`` sidecar (key=value lines).

    :return: the sidecar path
    """
    df = pd.DataFrame(
        {
            "t": [curve.t] * len(curve.vertices),
            "re_z": [z.real for z in curve.vertices],
            "im_z": [z.imag for z in curve.vertices],
        },
        columns=LEVEL_COLUMNS,
    )
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    meta_path = path + ".meta"
    with open(meta_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"t={CSV_FLOAT_FORMAT % curve.t}\n")
        f.write(f"closed={'true' if curve.closed else 'false'}\n")
        f.write(f"end_reason_start={curve.end_reasons[0].value}\n")
        f.write(f"end_reason_end={curve.end_reasons[1].value}\n")
    return meta_path


def read_level_csv(path: str) -> LevelCurve:
    df = pd.read_csv(path, float_precision="round_trip")
    missing = [col for col in LEVEL_COLUMNS if col not in df.columns]
    if missing:
        raise ValueError(f"{path}: not a level CSV, missing columns {missing}")
    if df.empty:
        raise ValueError(f"{path}: empty level curve")
    meta: Dict[str, str] = {}
    try:
        with open(path + ".meta", "r", encoding="utf-8") as f:
            for line in f:
                key, sep, value = line.strip().partition("=")
                if sep:
                    meta[key] = value
    except FileNotFoundError:
        log_debug("no sidecar for %s", path)
    vertices = [complex(re, im) for re, im in zip(df["re_z"], df["im_z"])]
    reasons = (
        LevelEndReason(meta.get("end_reason_start", LevelEndReason.STEP_LIMIT.value)),
        LevelEndReason(meta.get("end_reason_end", LevelEndReason.STEP_LIMIT.value)),
    )
    return LevelCurve(t=float(df["t"].iloc[0]), vertices=vertices, closed=meta.get("closed") == "true", end_reasons=reasons)


class LevelsClient(object):
    """
    Level-set operations bound to one map.
    """

    def __init__(self, phi: Node):
        self._phi = phi

    def seeds(self, t: float, grid_density: int = LEVEL_GRID_DENSITY) -> List[complex]:
        return seed_points(self._phi, t, grid_density)

    def project(self, z: complex, t: float, level_tol: float = LEVEL_TOL) -> complex:
        return project_to_level(self._phi, z, t, level_tol)

    def trace(self, t: float, seed: complex, opts: Optional[LevelOptions] = None) -> LevelCurve:
        return trace_level(self._phi, t, seed, opts)

    def components(
        self, t: float, grid_density: int = LEVEL_GRID_DENSITY, opts: Optional[LevelOptions] = None
    ) -> ResultList[LevelCurve]:
        return components(self._phi, t, grid_density, opts)
