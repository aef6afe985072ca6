import math

import pytest

from hypdiskpy.exception import HypDiskLevelError
from hypdiskpy.hypops import evaluate, grad_absD
from hypdiskpy.levels import (
    LevelCurve,
    LevelEndReason,
    LevelOptions,
    components,
    nesting_gap,
    project_to_level,
    read_level_csv,
    seed_points,
    trace_level,
    write_level_csv,
)


def test_projection_onto_a_blaschke_level(example4):
    z = project_to_level(example4, 0.45 + 0.01j, 0.8)
    assert abs(evaluate(example4, z).absD - 0.8) <= 1e-9
    assert abs(abs(z) - 0.5) < 1e-8


def test_projection_from_a_critical_point(example2):
    # grad |D| vanishes on the real axis of the lens map
    with pytest.raises(HypDiskLevelError):
        project_to_level(example2, 0.3, 0.25)


def test_seed_points_lie_on_the_level(example4):
    seeds = seed_points(example4, 0.8, 16)
    assert seeds
    for z in seeds:
        assert abs(abs(z) - 0.5) < 1e-9


@pytest.mark.parametrize("t", [0.0, 1.0, -0.5, 1.5])
def test_seed_points_reject_levels_outside_the_unit_interval(example4, t):
    with pytest.raises(ValueError):
        seed_points(example4, t)


def test_blaschke_level_is_a_closed_circle(example4):
    curve = trace_level(example4, 0.8, 0.5)
    assert curve.closed
    assert curve.end_reasons == (LevelEndReason.LOOP_CLOSED, LevelEndReason.LOOP_CLOSED)
    assert max(abs(abs(z) - 0.5) for z in curve.vertices) < 1e-8
    # the loop goes once around the origin
    length = sum(abs(b - a) for a, b in zip(curve.vertices, curve.vertices[1:]))
    assert abs(length - math.pi) < 0.05


def test_level_is_orthogonal_to_the_gradient(example2):
    t = 0.25
    seed = seed_points(example2, t, 16)[0]
    curve = trace_level(example2, t, project_to_level(example2, seed, t))
    mid = len(curve.vertices) // 2
    middle = curve.vertices[max(0, mid - 20) : mid + 20]
    for prev, z, nxt in zip(middle, middle[1:], middle[2:]):
        chord = nxt - prev
        grad = grad_absD(example2, z)
        cos = (chord * grad.conjugate()).real / (abs(chord) * abs(grad))
        assert abs(cos) < 1e-2


def test_trace_rejects_a_seed_off_the_level(example4):
    with pytest.raises(HypDiskLevelError):
        trace_level(example4, 0.8, 0.4)


def test_trace_rejects_a_critical_seed(example2):
    t = evaluate(example2, 0.3).absD
    with pytest.raises(HypDiskLevelError):
        trace_level(example2, t, 0.3)


def test_components_of_the_blaschke_level(example4):
    curves = components(example4, 0.8, 16)
    assert len(curves) == 1
    assert curves[0].closed


def test_components_of_the_lens_map(example2):
    arcs = components(example2, 0.25, 16)
    assert len(arcs) == 2
    assert not any(arc.closed for arc in arcs)
    # one arc in each half plane
    assert sorted(math.copysign(1.0, arc.vertices[len(arc.vertices) // 2].imag) for arc in arcs) == [-1.0, 1.0]
    assert len(components(example2, 0.99, 16)) == 0


def test_options_change_the_resolution(example4):
    coarse = trace_level(example4, 0.8, 0.5, LevelOptions(step=0.05))
    fine = trace_level(example4, 0.8, 0.5, LevelOptions(step=0.01))
    assert coarse.closed and fine.closed
    assert len(coarse.vertices) < len(fine.vertices)


def test_csv_and_sidecar(tmp_path):
    curve = LevelCurve(
        t=0.8,
        vertices=[0.5 + 0j, 0.5j, -0.5 + 0j, -0.5j],
        closed=True,
        end_reasons=(LevelEndReason.LOOP_CLOSED, LevelEndReason.LOOP_CLOSED),
    )
    path = str(tmp_path / "level.csv")
    meta = write_level_csv(curve, path)
    assert meta == path + ".meta"
    with open(meta, "r", encoding="utf-8") as f:
        assert f.read() == "t=0.80000000000000004\nclosed=true\nend_reason_start=loop_closed\nend_reason_end=loop_closed\n"
    assert read_level_csv(path) == curve


def test_csv_without_sidecar(tmp_path):
    path = tmp_path / "level.csv"
    path.write_text("t,re_z,im_z\n0.5,0.1,0.2\n0.5,0.2,0.1\n", encoding="utf-8")
    curve = read_level_csv(str(path))
    assert curve.t == 0.5
    assert not curve.closed
    assert curve.end_reasons == (LevelEndReason.STEP_LIMIT, LevelEndReason.STEP_LIMIT)
    assert curve.vertices == [0.1 + 0.2j, 0.2 + 0.1j]


def test_trace_stops_at_the_saddle(example3):
    t = evaluate(example3, 0j).absD
    seed = project_to_level(example3, 0.05 + 0.05j, t)
    curve = trace_level(example3, t, seed)
    assert LevelEndReason.CRITICAL_POINT in curve.end_reasons
    end = curve.vertices[0] if curve.end_reasons[0] == LevelEndReason.CRITICAL_POINT else curve.vertices[-1]
    assert abs(end) < 1e-8
    # the arc ends at the saddle instead of crossing onto another branch
    assert all(abs(z) > 1e-3 for z in curve.vertices[1:-1])


def test_step_collapse_is_not_a_critical_point(example4):
    curve = trace_level(example4, 0.8, 0.5, LevelOptions(max_turn=1e-12))
    assert curve.vertices == [0.5 + 0j]
    assert not curve.closed
    assert curve.end_reasons == (LevelEndReason.STEP_LIMIT, LevelEndReason.STEP_LIMIT)


def test_levels_of_the_exponential_map(example1):
    middle = components(example1, 0.25)
    assert len(middle) == 1
    assert not middle[0].closed
    low, high = components(example1, 0.2), components(example1, 0.3)
    gap = nesting_gap(low, high)
    assert gap is not None
    assert gap > LevelOptions().step / 2


def _open(vertices):
    return LevelCurve(
        t=0.5,
        vertices=vertices,
        closed=False,
        end_reasons=(LevelEndReason.DISK_BOUNDARY, LevelEndReason.DISK_BOUNDARY),
    )


def test_nesting_gap_skips_shared_ends():
    lower = _open([-0.9999999 + 1e-7j, -0.6 + 0.2j, -0.9999999 - 1e-7j])
    upper = _open([-0.9999998 + 1e-7j, -0.6 + 0.5j, -0.9999998 - 1e-7j])
    assert nesting_gap([lower], [upper]) == pytest.approx(0.3)
    assert nesting_gap([lower], [upper], end_margin=0.5) is None


def test_nesting_gap_of_closed_curves():
    inner = LevelCurve(
        t=0.5,
        vertices=[0.25 + 0j, 0.25j, -0.25 + 0j, -0.25j, 0.25 + 0j],
        closed=True,
        end_reasons=(LevelEndReason.LOOP_CLOSED, LevelEndReason.LOOP_CLOSED),
    )
    outer = inner.model_copy(update={"vertices": [2 * z for z in inner.vertices]})
    assert nesting_gap([inner], [outer]) == pytest.approx(0.25)
    assert nesting_gap([inner], []) is None
    assert nesting_gap([_open([0.1 + 0j, 0.15 + 0j])], [outer]) is None
