import math

import pytest

from hypdiskpy.exception import HypDiskEvaluationError, HypDiskUndefinedError, HypDiskZeroDerivativeError
from hypdiskpy.expr import eval_jet, eval_value, parse, substitute
from hypdiskpy.hypops import (
    a_operator,
    curvature,
    evaluate,
    geometric_curvature,
    grad_absD,
    hessian_absD,
    hyp_derivative,
    hyperbolic_distance,
    laplacian_log_absD,
    order_estimates,
    order_grid,
    schwarzian,
    wirtinger_A,
)
from hypdiskpy.model import ValueFlag
from hypdiskpy.util import random_disk_points, relative_error

H = 1e-5


def _abs_d(phi, z):
    return abs(hyp_derivative(phi, z))


def test_blaschke_closed_forms(example4, rng):
    for z in random_disk_points(rng, 20, r_max=0.9, r_min=0.1):
        r2 = abs(z) ** 2
        assert relative_error(_abs_d(example4, z), 2 * abs(z) / (1 + r2)) < 1e-12
        assert relative_error(a_operator(example4, z), (1 - r2) ** 2 / (2 * z * (1 + r2))) < 1e-12
        assert relative_error(schwarzian(example4, z), -1.5 / (z * z)) < 1e-10


def test_blaschke_at_the_zero_of_phi_prime(example4):
    point = evaluate(example4, 0j)
    assert point.A == ValueFlag.INFINITE
    assert point.absD == 0.0
    assert point.S is None
    assert point.grad is None
    assert point.curvature is None
    assert a_operator(example4, 0j) == ValueFlag.INFINITE
    for op in (schwarzian, wirtinger_A, grad_absD, hessian_absD, laplacian_log_absD, curvature):
        with pytest.raises(HypDiskZeroDerivativeError):
            op(example4, 0j)


def test_automorphism_is_an_isometry(mobius, rng):
    for z in random_disk_points(rng, 20):
        point = evaluate(mobius, z)
        assert abs(point.absD - 1.0) < 1e-12
        assert abs(point.A) < 1e-12
        assert abs(point.S) < 1e-12
    with pytest.raises(HypDiskUndefinedError):
        curvature(mobius, 0.2 + 0.1j)


def test_evaluate_matches_single_operators(example1):
    z = 0.3 - 0.4j
    point = evaluate(example1, z)
    assert point.D == hyp_derivative(example1, z)
    assert point.A == a_operator(example1, z)
    assert point.S == schwarzian(example1, z)
    assert point.grad == grad_absD(example1, z)
    assert (point.A_z, point.A_zbar) == wirtinger_A(example1, z)
    assert point.curvature == curvature(example1, z)
    assert point.phi == eval_value(example1, z)


@pytest.mark.parametrize("name", ["example1", "example2", "example3"])
def test_gradient_against_finite_differences(name, request):
    phi = request.getfixturevalue(name)
    z = 0.2 + 0.3j
    fd = (_abs_d(phi, z + H) - _abs_d(phi, z - H)) / (2 * H) + 1j * (
        _abs_d(phi, z + 1j * H) - _abs_d(phi, z - 1j * H)
    ) / (2 * H)
    assert relative_error(grad_absD(phi, z), fd) < 1e-6


@pytest.mark.parametrize("name", ["example1", "example2"])
def test_wirtinger_derivatives_against_finite_differences(name, request):
    phi = request.getfixturevalue(name)
    z = -0.25 + 0.35j
    a_x = (a_operator(phi, z + H) - a_operator(phi, z - H)) / (2 * H)
    a_y = (a_operator(phi, z + 1j * H) - a_operator(phi, z - 1j * H)) / (2 * H)
    a_z, a_zbar = wirtinger_A(phi, z)
    assert relative_error(a_z, 0.5 * (a_x - 1j * a_y)) < 1e-6
    assert relative_error(a_zbar, 0.5 * (a_x + 1j * a_y)) < 1e-6


def test_laplacian_of_log_abs_d(example1):
    z, h = 0.1 + 0.2j, 1e-4
    center = math.log(_abs_d(example1, z))
    ring = sum(math.log(_abs_d(example1, z + h * d)) for d in (1, -1, 1j, -1j))
    fd = (ring - 4 * center) / (h * h) / 4
    assert relative_error(laplacian_log_absD(example1, z), fd) < 1e-4


def test_hessian_trace_against_finite_differences(example2):
    z, h = 0.3 + 0.3j, 1e-4
    center = _abs_d(example2, z)
    ring = sum(_abs_d(example2, z + h * d) for d in (1, -1, 1j, -1j))
    _, d2_zzbar = hessian_absD(example2, z)
    assert relative_error(d2_zzbar, (ring - 4 * center) / (h * h) / 4) < 1e-4


def test_composition_rule(example2, example4):
    # A of a composition: A_f(g) g' (1-|z|^2)/(1-|g|^2) + A_g
    z = 0.3 + 0.2j
    composed = substitute(example2, example4)
    jet = eval_jet(example4, z)
    w, v = 1 - abs(z) ** 2, 1 - abs(jet.f) ** 2
    expected = a_operator(example2, jet.f) * jet.d1 * w / v + a_operator(example4, z)
    assert relative_error(a_operator(composed, z), expected) < 1e-10


def test_pre_composition_with_an_automorphism(example1, mobius, rng):
    composed = substitute(example1, mobius)
    for z in random_disk_points(rng, 10, r_max=0.5):
        jet = eval_jet(mobius, z)
        unit = jet.d1 / abs(jet.d1)
        assert relative_error(a_operator(composed, z), unit * a_operator(example1, jet.f)) < 1e-10
        assert abs(_abs_d(composed, z) - _abs_d(example1, jet.f)) < 1e-12


def test_curvature_of_a_centered_circle():
    r, eps = 0.5, 1e-4
    points = [r * complex(math.cos(a), math.sin(a)) for a in (-eps, 0.0, eps)]
    assert abs(geometric_curvature(*points) - (1 + r * r) / r) < 1e-6
    # reversed orientation flips the sign
    assert abs(geometric_curvature(*reversed(points)) + (1 + r * r) / r) < 1e-6
    assert abs(geometric_curvature(-0.1, 0.0, 0.1)) < 1e-15
    with pytest.raises(ValueError):
        geometric_curvature(0.1, 0.1, 0.2)


def test_hyperbolic_distance(mobius):
    assert abs(hyperbolic_distance(0, 0.5) - math.atanh(0.5)) < 1e-15
    assert hyperbolic_distance(0.3j, 0.3j) == 0.0
    z1, z2 = 0.1 + 0.2j, -0.4 + 0.1j
    moved = hyperbolic_distance(eval_value(mobius, z1), eval_value(mobius, z2))
    assert abs(moved - hyperbolic_distance(z1, z2)) < 1e-12


def test_order_estimates(mobius, example4, example2):
    estimate = order_estimates(mobius, 8)
    assert estimate.alpha_est < 1e-9
    assert estimate.n_points == len(order_grid(8))
    assert order_estimates(example4, 8).alpha_est == ValueFlag.INFINITE
    # A vanishes on the real axis of the lens map
    assert order_estimates(example2, 8).mu_est < 1e-10
    with pytest.raises(ValueError):
        order_estimates(mobius, 4)


def test_order_grid_refines():
    coarse, fine = set(order_grid(8)), set(order_grid(16))
    assert len(fine) > len(coarse)
    assert max(abs(z) for z in fine) < 1.0


def test_point_outside_the_disk(example1):
    with pytest.raises(HypDiskEvaluationError):
        evaluate(example1, 1.0 + 0.5j)


def test_phi_leaving_the_disk():
    with pytest.raises(HypDiskEvaluationError):
        evaluate(parse("2*z"), 0.6)
