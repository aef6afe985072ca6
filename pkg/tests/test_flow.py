import cmath
import math

import numpy as np
import pytest
from pydantic import ValidationError

from hypdiskpy.exception import HypDiskInvalidStartError
from hypdiskpy.flow import (
    TRAJECTORY_COLUMNS,
    Direction,
    TraceOptions,
    TrajectoryEndReason,
    dormand_prince_step,
    endpoint_report,
    growth_bound_check,
    level_drift,
    read_trajectory_csv,
    trace_trajectory,
    trajectory_frame,
    write_trajectory_csv,
)
from hypdiskpy.hypops import a_operator, geometric_curvature


def _blaschke_radius(t: float) -> float:
    # inverse of r -> 2r/(1+r^2)
    return (1.0 - math.sqrt(1.0 - t * t)) / t


def test_dormand_prince_step_on_a_rotation():
    z_new, err = dormand_prince_step(lambda t, z: 1j * z, 0.0, 1.0 + 0j, 0.1)
    assert abs(z_new - cmath.exp(0.1j)) < 1e-8
    assert abs(err) < 1e-6


def test_blaschke_trajectories_are_radial(example4):
    traj = trace_trajectory(example4, 0.2, TraceOptions(direction=Direction.FORWARD, t_max=0.9))
    assert traj.end_reason_minus is None
    assert traj.end_reason_plus == TrajectoryEndReason.USER_INTERVAL
    assert abs(traj.omega_plus_est - 0.9) < 1e-15
    ts = [s.t for s in traj.samples]
    assert ts == sorted(ts)
    zs = np.array([s.z for s in traj.samples])
    np.testing.assert_allclose(zs.imag, 0.0, atol=1e-12)
    np.testing.assert_allclose(zs.real, [_blaschke_radius(s.t) for s in traj.samples], rtol=0, atol=1e-8)
    np.testing.assert_allclose([s.kappa for s in traj.samples], 0.0, atol=1e-8)


def test_blaschke_backward_reaches_the_zero_of_phi_prime(example4):
    traj = trace_trajectory(example4, 0.2, TraceOptions(direction=Direction.BACKWARD))
    assert traj.end_reason_plus is None
    assert traj.end_reason_minus in (TrajectoryEndReason.PHI_PRIME_ZERO, TrajectoryEndReason.STEP_LIMIT)
    assert traj.omega_minus_est < 1e-3
    assert abs(traj.samples[0].z) < 1e-3


def test_symmetric_map_keeps_the_real_axis(example1):
    traj = trace_trajectory(example1, 0j, TraceOptions(direction=Direction.FORWARD))
    assert all(abs(s.z.imag) < 1e-12 for s in traj.samples)
    # |D| = a g / sinh g on the axis grows toward -1
    assert traj.samples[-1].z.real < -0.9
    assert traj.omega_plus_est > 0.49
    assert traj.omega_plus_est < 0.5


def test_trajectory_is_tangent_to_the_flow(example1):
    traj = trace_trajectory(example1, 0.1j, TraceOptions(direction=Direction.FORWARD, max_step=1e-3))
    for s, s_next in list(zip(traj.samples, traj.samples[1:]))[:50]:
        chord = s_next.z - s.z
        A_mid = a_operator(example1, 0.5 * (s.z + s_next.z))
        # z' is a positive multiple of 1/A
        assert abs(cmath.phase(chord * A_mid)) < 1e-2


def test_curvature_matches_the_traced_curve(example1):
    traj = trace_trajectory(example1, 0.1j, TraceOptions(direction=Direction.FORWARD, max_step=1e-3))
    samples = traj.samples[10:60]
    for prev, s, nxt in zip(samples, samples[1:], samples[2:]):
        measured = geometric_curvature(prev.z, s.z, nxt.z)
        assert abs(measured - s.kappa) < 1e-2 * max(1.0, abs(s.kappa))


@pytest.mark.parametrize(
    "name, start",
    [("example1", 0.1j), ("example2", 0.3j), ("example4", 0.2)],
)
def test_level_is_preserved_and_growth_bound_holds(name, start, request):
    phi = request.getfixturevalue(name)
    traj = trace_trajectory(phi, start, TraceOptions(t_min=0.05, t_max=0.95))
    assert level_drift(traj) < 1e-8
    check = growth_bound_check(traj)
    assert check.holds
    assert check.lhs >= 0.0


@pytest.mark.parametrize(
    "name, start",
    [("example4", 0j), ("example4", 1.2), ("example2", 0.3)],
)
def test_invalid_starts(name, start, request):
    with pytest.raises(HypDiskInvalidStartError):
        trace_trajectory(request.getfixturevalue(name), start)


def test_endpoint_report(example4):
    traj = trace_trajectory(example4, 0.3, TraceOptions(t_max=0.8))
    report = endpoint_report([traj])
    assert len(report) == 2
    assert report[0].direction == Direction.BACKWARD
    assert report[1].direction == Direction.FORWARD
    assert report[1].reason == TrajectoryEndReason.USER_INTERVAL
    assert report[1].z == traj.samples[-1].z


def test_csv_round_trip(example4, tmp_path):
    traj = trace_trajectory(example4, 0.2, TraceOptions(direction=Direction.FORWARD, t_max=0.5))
    path = str(tmp_path / "traj.csv")
    write_trajectory_csv(traj, path)
    with open(path, "r", encoding="utf-8") as f:
        assert f.readline().strip() == ",".join(TRAJECTORY_COLUMNS)
    back = read_trajectory_csv(path)
    assert back.phi is None
    assert [s.z for s in back.samples] == [s.z for s in traj.samples]
    assert [s.t for s in back.samples] == [s.t for s in traj.samples]
    assert len(trajectory_frame(back)) == len(traj.samples)


def test_read_rejects_other_csv(tmp_path):
    path = tmp_path / "other.csv"
    path.write_text("a,b\n1,2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_trajectory_csv(str(path))


def test_level_drift_needs_the_map(example4, tmp_path):
    traj = trace_trajectory(example4, 0.2, TraceOptions(direction=Direction.FORWARD, t_max=0.5))
    path = str(tmp_path / "traj.csv")
    write_trajectory_csv(traj, path)
    with pytest.raises(ValueError):
        level_drift(read_trajectory_csv(path))
    assert level_drift(read_trajectory_csv(path), example4) < 1e-8


def test_options_are_validated():
    with pytest.raises(ValidationError):
        TraceOptions(level_tol=-1.0)
    with pytest.raises(ValidationError):
        TraceOptions(t_max=1.5)


@pytest.mark.parametrize("level", [0.43, 0.45, 0.49])
def test_trajectory_crosses_each_level_once(example1, level):
    # |D| grows from |D(0)| ~ 0.4255 toward a = 0.5
    traj = trace_trajectory(example1, 0j, TraceOptions(direction=Direction.FORWARD))
    side = np.sign(np.array([s.absD for s in traj.samples]) - level)
    assert np.count_nonzero(np.diff(side)) == 1


def test_fan_of_trajectories_ends_near_minus_one(example1):
    for k in range(8):
        start = 0.3 * cmath.exp(2j * math.pi * k / 8)
        traj = trace_trajectory(example1, start, TraceOptions(direction=Direction.FORWARD))
        assert abs(traj.samples[-1].z + 1.0) < 0.05
