import math

import numpy as np
import pytest
from scipy import integrate, special

from hypdiskpy.exception import HypDiskEvaluationError, HypDiskParseError
from hypdiskpy.expr import (
    NodeKind,
    builtin,
    check_self_map,
    elliptic_g_value,
    elliptic_k,
    eval_jet,
    eval_value,
    has_var,
    list_builtins,
    parse,
    substitute,
    unparse,
)


@pytest.mark.parametrize(
    "text, z, expected",
    [
        ("2*z+1", 0.5, 2.0),
        ("1-2-3", 0.0, -4.0),
        ("8/4/2", 0.0, 1.0),
        ("-z^2", 0.5, -0.25),
        ("2^3^2", 0.0, 512.0),
        ("2^-1", 0.0, 0.5),
        ("(1+z)*(1-z)", 0.5, 0.75),
        ("z*i", 0.5, 0.5j),
        ("exp(log(1+z))", 0.25, 1.25),
    ],
)
def test_parse_and_evaluate(text, z, expected):
    assert abs(eval_value(parse(text), z) - expected) < 1e-14


def test_constant_subtrees_are_folded():
    node = parse("2*pi")
    assert node.kind == NodeKind.CONST
    assert abs(node.value - 2 * math.pi) < 1e-15
    assert parse("z*(2*pi)").children[1].kind == NodeKind.CONST


@pytest.mark.parametrize(
    "text, position",
    [
        ("z^i", 2),
        ("z^z", 2),
        ("foo(z)", 0),
        ("z + q", 4),
        ("", 0),
        ("z+", 2),
        ("(z", 2),
        ("z $ 1", 2),
    ],
)
def test_parse_errors_carry_position(text, position):
    with pytest.raises(HypDiskParseError) as e:
        parse(text)
    assert e.value.position == position
    assert f"position {position}" in str(e.value)


def test_non_real_exponent_message():
    with pytest.raises(HypDiskParseError) as e:
        parse("z^i")
    assert e.value.msg == "non-real exponent"


@pytest.mark.parametrize(
    "text",
    [
        "example1(a=1.5)",
        "example1(0.5)",
        "example1()",
        "example4(c=0.6, d=1)",
        "example3(theta=2)",
        "mobius(a_re=1)",
        "exp(z, z)",
        "ellipticg(z)",
        "ellipticg(z, c=1)",
        "example2(a=z)",
    ],
)
def test_invalid_calls(text):
    with pytest.raises(HypDiskParseError):
        parse(text)


def test_builtin_call_matches_factory():
    assert parse("example4(c=0.6)") == builtin("example4", c=0.6)
    assert parse("identity()") == parse("z")
    assert parse("mobius()") == builtin("mobius")


def test_list_builtins():
    names = [spec.name for spec in list_builtins()]
    assert names == ["example1", "example2", "example3", "example4", "mobius", "identity"]


@pytest.mark.parametrize(
    "name, params",
    [
        ("example1", {"a": 0.5}),
        ("example2", {"a": 0.3}),
        ("example3", {"theta": math.pi / 4}),
        ("example3", {"theta": math.pi / 3}),
        ("example4", {"c": 0.6}),
        ("mobius", {"a_re": -0.5, "a_im": 0.25, "theta": 2.5}),
    ],
)
def test_unparse_then_parse_gives_the_same_tree(name, params):
    node = builtin(name, **params)
    assert parse(unparse(node)) == node


def test_substitute_composes():
    node = substitute(parse("z*z"), parse("z+1"))
    assert abs(eval_value(node, 0.5) - 2.25) < 1e-15
    assert has_var(node)
    assert not has_var(parse("2*pi"))


def test_eval_outside_disk():
    with pytest.raises(HypDiskEvaluationError):
        eval_jet(parse("z"), 1.0)


def test_builtins_map_zero_as_expected():
    assert abs(eval_value(builtin("example1", a=0.5), 0j) - math.exp(-1)) < 1e-15
    assert abs(eval_value(builtin("example2", a=0.5), 0j)) < 1e-15
    assert abs(eval_value(builtin("example3", theta=math.pi / 4), 0j)) < 1e-15
    assert abs(eval_value(builtin("example4", c=0.6), 0j) + 0.36) < 1e-15


def test_elliptic_k_agrees_with_scipy():
    for k in (0.0, 0.3, math.sqrt(0.5), 0.9, 0.99):
        assert abs(elliptic_k(k) - special.ellipk(k * k)) < 1e-12 * special.ellipk(k * k)
    assert abs(elliptic_k(math.sqrt(0.5)) - 1.854074677301372) < 1e-12
    with pytest.raises(ValueError):
        elliptic_k(1.0)


def test_elliptic_g_on_the_real_axis():
    s = np.linspace(0.0, 0.7, 2001)
    for c in (0.0, 0.5, -0.5):
        reference = integrate.simpson(1.0 / np.sqrt(1.0 - 2.0 * c * s ** 2 + s ** 4), x=s)
        value = elliptic_g_value(0.7, c)
        assert abs(value.real - reference) < 1e-10
        assert abs(value.imag) < 1e-12


def test_elliptic_g_derivative():
    # g'(z) = (1 - 2cz^2 + z^4)^(-1/2)
    z, c = 0.3 + 0.2j, 0.5
    jet = eval_jet(parse(f"ellipticg(z, c={c})"), z)
    assert abs(jet.d1 - (1 - 2 * c * z * z + z ** 4) ** -0.5) < 1e-12


def test_check_self_map():
    report = check_self_map(builtin("example4", c=0.6), 8)
    assert report.is_self_map
    assert report.max_abs_phi < 1.0
    assert report.n_points > 0
    assert not check_self_map(parse("2*z"), 8).is_self_map
    with pytest.raises(ValueError):
        check_self_map(parse("z"), 0)
