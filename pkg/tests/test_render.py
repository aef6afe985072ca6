import pytest

from hypdiskpy.crit import Classification, CriticalKind, classify, write_critical_report
from hypdiskpy.expr import parse
from hypdiskpy.flow import Direction, TraceOptions, Trajectory, TrajectorySample, trace_trajectory, write_trajectory_csv
from hypdiskpy.levels import LevelCurve, LevelEndReason, trace_level, write_level_csv
from hypdiskpy.render import RenderOptions, render_files, render_svg

SQUARE = LevelCurve(
    t=0.8,
    vertices=[0.5 + 0j, 0.5j, -0.5 + 0j, -0.5j],
    closed=True,
    end_reasons=(LevelEndReason.LOOP_CLOSED, LevelEndReason.LOOP_CLOSED),
)

ARC = LevelCurve(
    t=0.25,
    vertices=[-0.9 + 0.1j, 0.5j, 0.9 + 0.1j],
    closed=False,
    end_reasons=(LevelEndReason.DISK_BOUNDARY, LevelEndReason.DISK_BOUNDARY),
)

SEGMENT = Trajectory(
    z0=0.1 + 0j,
    t0=0.2,
    samples=[
        TrajectorySample(t=0.2, z=0.1 + 0j, absD=0.2, absA=1.0),
        TrajectorySample(t=0.3, z=0.2 - 0.1j, absD=0.3, absA=0.5),
    ],
    omega_minus_est=0.2,
    omega_plus_est=0.3,
)

MARKER = (CriticalKind.A_ZERO, -0.25 + 0.5j, Classification.SADDLE)


def test_svg_structure():
    svg = render_svg([SQUARE, ARC], [SEGMENT], [MARKER])
    assert svg.startswith('<?xml version="1.0" standalone="no"?>\n')
    assert svg.endswith("</g>\n</svg>\n")
    assert 'viewBox="-1.05 -1.05 2.1 2.1"' in svg
    assert svg.count('<circle class="disk"') == 1
    assert svg.count('<path class="level"') == 2
    assert 'd="M 0.500000 0.000000 L 0.000000 0.500000 L -0.500000 0.000000 L 0.000000 -0.500000 Z"' in svg
    assert 'd="M -0.900000 0.100000 L 0.000000 0.500000 L 0.900000 0.100000"' in svg
    assert 'points="0.100000,0.000000 0.200000,-0.100000"' in svg
    assert 'class="critical A_zero saddle" cx="-0.250000" cy="0.500000"' in svg


def test_svg_has_no_negative_zero():
    svg = render_svg([SQUARE])
    assert "-0.000000" not in svg


def test_svg_options():
    svg = render_svg([SQUARE], opts=RenderOptions(width_px=400, show_disk=False, level_color="#ff0000"))
    assert 'width="400" height="400"' in svg
    assert 'class="disk"' not in svg
    assert 'stroke="#ff0000"' in svg


def test_svg_is_deterministic():
    assert render_svg([SQUARE, ARC], [SEGMENT], [MARKER]) == render_svg([SQUARE, ARC], [SEGMENT], [MARKER])


def test_render_files(example4, tmp_path):
    traj = trace_trajectory(example4, 0.2, TraceOptions(direction=Direction.FORWARD, t_max=0.5))
    curve = trace_level(example4, 0.8, 0.5)
    traj_path, level_path, crit_path = (str(tmp_path / name) for name in ("traj.csv", "level.csv", "crit.csv"))
    write_trajectory_csv(traj, traj_path)
    write_level_csv(curve, level_path)
    write_critical_report([classify(parse("0.5*z"), 0j)], crit_path)
    out = str(tmp_path / "plot.svg")
    text = render_files([crit_path, level_path, traj_path], out)
    with open(out, "r", encoding="utf-8") as f:
        assert f.read() == text
    assert text.count('<path class="level"') == 1
    assert text.count('<polyline class="trajectory"') == 1
    assert text.count('class="critical A_zero strict_local_max"') == 1
    assert render_files([traj_path, level_path, crit_path], str(tmp_path / "again.svg")) == text


def test_render_files_rejects_bad_input(tmp_path):
    with pytest.raises(ValueError):
        render_files([], str(tmp_path / "out.svg"))
    other = tmp_path / "other.csv"
    other.write_text("x,y\n1,2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        render_files([str(other)], str(tmp_path / "out.svg"))
