import cmath
import math
from typing import Callable, Dict, List, Tuple

from hypdiskpy.exception import HypDiskParseError
from hypdiskpy.expr import node as ast
from hypdiskpy.expr.node import Node
from hypdiskpy.model import FrozenModel

AGM_TOL = 1e-15


def elliptic_k(k: float) -> float:
    """
    Complete elliptic integral of the first kind in the modulus convention,
    K(k) = pi / (2 * AGM(1, sqrt(1 - k^2))).

    :param k: modulus, 0 <= k < 1
    """
    if not 0.0 <= k < 1.0:
        raise ValueError(f"elliptic_k requires 0 <= k < 1, got {k}")
    a, b = 1.0, math.sqrt(1.0 - k * k)
    for _ in range(64):
        if abs(a - b) <= AGM_TOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (a + b)


def _cayley_power(a: float) -> Node:
    # ((1+z)/(1-z))^a maps the disk into the sector |arg w| < a*pi/2
    return ast.pow_real(ast.div(ast.add(ast.const(1), ast.var()), ast.sub(ast.const(1), ast.var())), a)


def _check_open_unit(name: str, key: str, value: float) -> None:
    if not 0.0 < value < 1.0:
        raise HypDiskParseError(f"{name} requires 0 < {key} < 1, got {value}")


def example1(a: float) -> Node:
    _check_open_unit("example1", "a", a)
    return ast.exp(ast.neg(_cayley_power(a)))


def example2(a: float) -> Node:
    _check_open_unit("example2", "a", a)
    g = _cayley_power(a)
    return ast.div(ast.sub(g, ast.const(1)), ast.add(g, ast.const(1)))


def example3(theta: float) -> Node:
    """
    tan(alpha * g(z)) with g the elliptic integral of parameter c = cos(2*theta),
    alpha = pi / (2*K(cos theta)); written as i(1 - e^{2i alpha g}) / (1 + e^{2i alpha g}).
    """
    if not 0.0 < theta < math.pi / 2:
        raise HypDiskParseError(f"example3 requires 0 < theta < pi/2, got {theta}")
    c = math.cos(2.0 * theta)
    k_cos = elliptic_k(math.cos(theta))
    rotation = ast.exp(ast.mul(ast.const(1j * math.pi / k_cos), ast.elliptic_g(ast.var(), c)))
    return ast.div(
        ast.mul(ast.const(1j), ast.sub(ast.const(1), rotation)),
        ast.add(ast.const(1), rotation),
    )


def example4(c: float) -> Node:
    _check_open_unit("example4", "c", c)
    c2 = c * c
    square = ast.pow_real(ast.var(), 2)
    return ast.div(ast.sub(square, ast.const(c2)), ast.sub(ast.const(1), ast.mul(ast.const(c2), square)))


def mobius(a_re: float = 0.0, a_im: float = 0.0, theta: float = 0.0) -> Node:
    a = complex(a_re, a_im)
    if abs(a) >= 1.0:
        raise HypDiskParseError(f"mobius requires |a| < 1, got {abs(a)}")
    return ast.mul(
        ast.const(cmath.exp(1j * theta)),
        ast.div(ast.sub(ast.var(), ast.const(a)), ast.sub(ast.const(1), ast.mul(ast.const(a.conjugate()), ast.var()))),
    )


def identity() -> Node:
    return ast.var()


class BuiltinSpec(FrozenModel):
    name: str
    parameters: Tuple[str, ...]
    description: str
    factory: Callable[..., Node]


BUILTINS: Dict[str, BuiltinSpec] = {
    spec.name: spec
    for spec in [
        BuiltinSpec(
            name="example1",
            parameters=("a",),
            description="exp(-((1+z)/(1-z))^a); A never vanishes, omega+ = a",
            factory=example1,
        ),
        BuiltinSpec(
            name="example2",
            parameters=("a",),
            description="(g-1)/(g+1) with g = ((1+z)/(1-z))^a; lens map, |D| = a on (-1, 1)",
            factory=example2,
        ),
        BuiltinSpec(
            name="example3",
            parameters=("theta",),
            description="tan(alpha * ellipticg(z, c=cos 2theta)); saddle of |D| at 0",
            factory=example3,
        ),
        BuiltinSpec(
            name="example4",
            parameters=("c",),
            description="Blaschke product (z^2-c^2)/(1-c^2 z^2); circular level sets",
            factory=example4,
        ),
        BuiltinSpec(
            name="mobius",
            parameters=("a_re", "a_im", "theta"),
            description="e^{i theta}(z-a)/(1-conj(a) z); disk automorphism",
            factory=mobius,
        ),
        BuiltinSpec(
            name="identity",
            parameters=(),
            description="z",
            factory=identity,
        ),
    ]
}


def builtin(name: str, **params: float) -> Node:
    """
    Build the expression tree of a named builtin.

    :param name: one of ``list_builtins()``
    :param params: real keyword parameters, e.g. ``a=0.5``
    """
    spec = BUILTINS.get(name)
    if spec is None:
        raise HypDiskParseError(f"unknown builtin {name!r}")
    unknown = sorted(set(params) - set(spec.parameters))
    if unknown:
        raise HypDiskParseError(f"{name} has no parameter(s) {', '.join(unknown)}")
    if name != "mobius":
        missing = [key for key in spec.parameters if key not in params]
        if missing:
            raise HypDiskParseError(f"{name} requires parameter(s) {', '.join(missing)}")
    return spec.factory(**{key: float(value) for key, value in params.items()})


def list_builtins() -> List[BuiltinSpec]:
    return list(BUILTINS.values())
