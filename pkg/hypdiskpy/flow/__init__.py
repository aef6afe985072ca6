"""
Orthogonal trajectories of the level sets of |D_phi|.

A trajectory solves z'(t) = (1-|z|^2) / (2 t A_phi(z)) with the level t as its
parameter, so |D_phi(z(t))| = t along it. The integrator is a Dormand-Prince 5(4)
pair with step control; every accepted point is projected back onto its level.
"""

import math
from enum import Enum
from typing import Callable, List, Optional, Tuple

import pandas as pd
from pydantic import Field

from hypdiskpy.config import (
    A_BLOWUP,
    A_VANISHING,
    BOUNDARY_MARGIN,
    CSV_FLOAT_FORMAT,
    LEVEL_TOL,
    MAX_STEPS,
    MAX_T_STEP,
    MIN_T_STEP,
    PROJECTION_MAX_ITER,
    RK_RTOL,
)
from hypdiskpy.exception import HypDiskInvalidStartError, HypDiskNumericError, HypDiskUndefinedError
from hypdiskpy.expr import Node
from hypdiskpy.hypops import HypPoint, evaluate, hyperbolic_distance
from hypdiskpy.levels import project_to_level
from hypdiskpy.log import log_debug, log_info
from hypdiskpy.model import HypDiskModel, ResultList, ValueFlag

TRAJECTORY_COLUMNS = ["t", "re_z", "im_z", "absD", "absA", "kappa"]

# Dormand-Prince 5(4) tableau
_DP_C = [0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0]
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B = [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0]
# fifth minus fourth order weights
_DP_E = [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    BOTH = "both"


class TrajectoryEndReason(str, Enum):
    DISK_BOUNDARY = "disk_boundary"
    A_VANISHING = "A_vanishing"
    PHI_PRIME_ZERO = "phi_prime_zero"
    STEP_LIMIT = "step_limit"
    USER_INTERVAL = "user_interval"


class TraceOptions(HypDiskModel):
    direction: Direction = Direction.BOTH
    level_tol: float = Field(default=LEVEL_TOL, gt=0)
    max_steps: int = Field(default=MAX_STEPS, gt=0)
    boundary_margin: float = Field(default=BOUNDARY_MARGIN, gt=0, lt=1)
    # stop forward tracing at t_max and backward tracing at t_min
    t_min: Optional[float] = Field(default=None, gt=0, lt=1)
    t_max: Optional[float] = Field(default=None, gt=0, lt=1)
    max_step: float = Field(default=MAX_T_STEP, gt=0)
    rtol: float = Field(default=RK_RTOL, gt=0)


class TrajectorySample(HypDiskModel):
    t: float
    z: complex
    absD: float
    absA: float
    # nan where the curvature is undefined
    kappa: float = math.nan


class Trajectory(HypDiskModel):
    phi: Optional[Node] = None
    z0: complex
    t0: float
    samples: List[TrajectorySample]
    omega_minus_est: float
    omega_plus_est: float
    end_reason_minus: Optional[TrajectoryEndReason] = None
    end_reason_plus: Optional[TrajectoryEndReason] = None


class GrowthBoundResult(HypDiskModel):
    lhs: float
    rhs: float
    holds: bool


class Endpoint(HypDiskModel):
    start: complex
    direction: Direction
    z: complex
    t: float
    reason: Optional[TrajectoryEndReason]


def dormand_prince_step(
    f: Callable[[float, complex], complex], t: float, z: complex, h: float
) -> Tuple[complex, complex]:
    """
    One Dormand-Prince 5(4) step.

    :return: (fifth-order solution, local error estimate)
    """
    k: List[complex] = []
    for i in range(7):
        zi = z + h * sum(a * kj for a, kj in zip(_DP_A[i], k))
        k.append(f(t + _DP_C[i] * h, zi))
    z_new = z + h * sum(b * ki for b, ki in zip(_DP_B, k))
    err = h * sum(e * ki for e, ki in zip(_DP_E, k))
    return z_new, err


def _field(phi: Node) -> Callable[[float, complex], complex]:
    def rhs(t: float, z: complex) -> complex:
        point = evaluate(phi, z)
        if point.A == ValueFlag.INFINITE or point.A == 0:
            raise HypDiskUndefinedError("trajectory field is undefined", z)
        return (1.0 - abs(z) ** 2) / (2.0 * t * point.A)

    return rhs


def _sample(point: HypPoint, t: float) -> TrajectorySample:
    kappa = point.curvature if point.curvature is not None else math.nan
    return TrajectorySample(t=t, z=point.z, absD=point.absD, absA=abs(point.A), kappa=kappa)


def _end_reason(point: HypPoint, opts: TraceOptions) -> Optional[TrajectoryEndReason]:
    if point.A == ValueFlag.INFINITE or abs(point.A) > A_BLOWUP:
        return TrajectoryEndReason.PHI_PRIME_ZERO
    if abs(point.z) > 1.0 - opts.boundary_margin:
        return TrajectoryEndReason.DISK_BOUNDARY
    if abs(point.A) < A_VANISHING:
        return TrajectoryEndReason.A_VANISHING
    return None


def _trace_direction(
    phi: Node, start: HypPoint, t0: float, sign: float, opts: TraceOptions
) -> Tuple[List[TrajectorySample], TrajectoryEndReason]:
    f = _field(phi)
    samples: List[TrajectorySample] = []
    t, z = t0, start.z
    limit = opts.t_max if sign > 0 else opts.t_min
    h = sign * opts.max_step * 0.1
    accepted = 0
    while True:
        if accepted >= opts.max_steps:
            return samples, TrajectoryEndReason.STEP_LIMIT
        if limit is not None and sign * (limit - t) <= 0.0:
            return samples, TrajectoryEndReason.USER_INTERVAL
        if abs(h) < MIN_T_STEP:
            log_debug("trajectory step underflow at t=%r, z=%r", t, z)
            return samples, TrajectoryEndReason.STEP_LIMIT
        if limit is not None and sign * (t + h - limit) > 0.0:
            h = limit - t
        if sign < 0 and t + h <= 0.0:
            h = -0.5 * t
        t_new = t + h
        if t_new >= 1.0:
            h *= 0.5
            continue
        try:
            z_new, err = dormand_prince_step(f, t, z, h)
        except HypDiskNumericError:
            h *= 0.5
            continue
        tol = opts.rtol * max(abs(z), abs(z_new), 1e-3)
        err_norm = abs(err)
        factor = 5.0 if err_norm == 0.0 else min(5.0, max(0.2, 0.9 * (tol / err_norm) ** 0.2))
        if err_norm > tol or abs(z_new) >= 1.0:
            h *= min(factor, 0.5)
            continue
        try:
            z_new = project_to_level(phi, z_new, t_new, opts.level_tol, PROJECTION_MAX_ITER)
            point = evaluate(phi, z_new)
        except HypDiskNumericError:
            h *= 0.5
            continue
        t, z = t_new, z_new
        samples.append(_sample(point, t))
        accepted += 1
        reason = _end_reason(point, opts)
        if reason is not None:
            return samples, reason
        h = sign * min(abs(h) * factor, opts.max_step)


def trace_trajectory(phi: Node, z0: complex, opts: Optional[TraceOptions] = None) -> Trajectory:
    """
    Trace the trajectory through z0 forward and/or backward in the level.

    :param phi: expression tree of the map
    :param z0: start point; phi'(z0) and A_phi(z0) must not vanish
    :param opts: tracing options, defaults from ``hypdiskpy.config``
    :return: samples ordered by increasing t, with the reason each direction ended
    """
    opts = opts or TraceOptions()
    z0 = complex(z0)
    if abs(z0) >= 1.0:
        raise HypDiskInvalidStartError(z0, "outside the open unit disk")
    start = evaluate(phi, z0)
    if start.A == ValueFlag.INFINITE:
        raise HypDiskInvalidStartError(z0, "phi' vanishes")
    if abs(start.A) < A_VANISHING:
        raise HypDiskInvalidStartError(z0, "A vanishes (critical point)")
    t0 = start.absD
    backward: List[TrajectorySample] = []
    forward: List[TrajectorySample] = []
    reason_minus = reason_plus = None
    if opts.direction in (Direction.BACKWARD, Direction.BOTH):
        backward, reason_minus = _trace_direction(phi, start, t0, -1.0, opts)
    if opts.direction in (Direction.FORWARD, Direction.BOTH):
        forward, reason_plus = _trace_direction(phi, start, t0, 1.0, opts)
    samples = list(reversed(backward)) + [_sample(start, t0)] + forward
    log_info(
        "trajectory from %r: t in [%.6g, %.6g], ends %s / %s",
        z0,
        samples[0].t,
        samples[-1].t,
        reason_minus.value if reason_minus else "-",
        reason_plus.value if reason_plus else "-",
    )
    return Trajectory(
        phi=phi,
        z0=z0,
        t0=t0,
        samples=samples,
        omega_minus_est=samples[0].t,
        omega_plus_est=samples[-1].t,
        end_reason_minus=reason_minus,
        end_reason_plus=reason_plus,
    )


def level_drift(traj: Trajectory, phi: Optional[Node] = None) -> float:
    """
    max | |D_phi(z)| - t | over the samples, with |D_phi| recomputed from phi.
    """
    phi = phi or traj.phi
    if phi is None:
        raise ValueError("level_drift needs the map the trajectory was traced for")
    if not traj.samples:
        raise ValueError("empty trajectory")
    return max(abs(evaluate(phi, s.z).absD - s.t) for s in traj.samples)


def growth_bound_check(traj: Trajectory) -> GrowthBoundResult:
    """
    Growth bound along the forward part: log(t/t0) >= 2 * min|A| * d(z(t0), z(t))
    at the last level reached.
    """
    forward = [s for s in traj.samples if s.t >= traj.t0]
    if len(forward) < 2:
        return GrowthBoundResult(lhs=0.0, rhs=0.0, holds=True)
    first, last = forward[0], forward[-1]
    lhs = math.log(last.t / traj.t0)
    min_a = min(s.absA for s in forward)
    rhs = 2.0 * min_a * hyperbolic_distance(first.z, last.z)
    return GrowthBoundResult(lhs=lhs, rhs=rhs, holds=lhs >= rhs - 1e-9)


def endpoint_report(trajs: List[Trajectory]) -> ResultList[Endpoint]:
    """
    Final point of each traced direction of each trajectory. Exploratory data only.
    """
    result: List[Endpoint] = []
    for traj in trajs:
        if traj.end_reason_minus is not None:
            first = traj.samples[0]
            result.append(
                Endpoint(start=traj.z0, direction=Direction.BACKWARD, z=first.z, t=first.t, reason=traj.end_reason_minus)
            )
        if traj.end_reason_plus is not None:
            last = traj.samples[-1]
            result.append(
                Endpoint(start=traj.z0, direction=Direction.FORWARD, z=last.z, t=last.t, reason=traj.end_reason_plus)
            )
    return ResultList(result)


def trajectory_frame(traj: Trajectory) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "t": [s.t for s in traj.samples],
            "re_z": [s.z.real for s in traj.samples],
            "im_z": [s.z.imag for s in traj.samples],
            "absD": [s.absD for s in traj.samples],
            "absA": [s.absA for s in traj.samples],
            "kappa": [s.kappa for s in traj.samples],
        },
        columns=TRAJECTORY_COLUMNS,
    )


def write_trajectory_csv(traj: Trajectory, path: str) -> None:
    trajectory_frame(traj).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="nan", lineterminator="\n")


def read_trajectory_csv(path: str) -> Trajectory:
    """
    Read a trajectory CSV back; the map itself is not stored, so ``phi`` is None
    and t0 is the first sample's level.
    """
    df = pd.read_csv(path, float_precision="round_trip")
    missing = [col for col in TRAJECTORY_COLUMNS if col not in df.columns]
    if missing:
        raise ValueError(f"{path}: not a trajectory CSV, missing columns {missing}")
    samples = [
        TrajectorySample(t=row.t, z=complex(row.re_z, row.im_z), absD=row.absD, absA=row.absA, kappa=row.kappa)
        for row in df.itertuples(index=False)
    ]
    if not samples:
        raise ValueError(f"{path}: empty trajectory")
    return Trajectory(
        z0=samples[0].z,
        t0=samples[0].t,
        samples=samples,
        omega_minus_est=samples[0].t,
        omega_plus_est=samples[-1].t,
    )


class FlowClient(object):
    """
    Trajectory operations bound to one map.
    """

    def __init__(self, phi: Node):
        self._phi = phi

    def trace(self, z0: complex, opts: Optional[TraceOptions] = None) -> Trajectory:
        return trace_trajectory(self._phi, z0, opts)

    def level_drift(self, traj: Trajectory) -> float:
        return level_drift(traj, self._phi)

    def growth_bound_check(self, traj: Trajectory) -> GrowthBoundResult:
        return growth_bound_check(traj)

    def endpoints(self, trajs: List[Trajectory]) -> ResultList[Endpoint]:
        return endpoint_report(trajs)
