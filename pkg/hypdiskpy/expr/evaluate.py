import cmath
from typing import Dict, List, Tuple

import numpy as np
from scipy import integrate

from hypdiskpy.config import QUAD_EPSABS, QUAD_EPSREL, QUAD_LIMIT, SELF_MAP_RADIUS
from hypdiskpy.exception import HypDiskEvaluationError, HypDiskNumericError, HypDiskQuadratureError
from hypdiskpy.expr.node import Node, NodeKind
from hypdiskpy.jet import Jet3, jet_arith, jet_compose, jet_const, jet_elementary, jet_pow_real, jet_var
from hypdiskpy.log import log_debug
from hypdiskpy.model import HypDiskModel
from hypdiskpy.util import polar_grid

# quad may flag round-off at tight tolerances; accept when its own error estimate is this small
QUAD_ACCEPT = 1e-10

_ARITH = {
    NodeKind.ADD: "add",
    NodeKind.SUB: "sub",
    NodeKind.MUL: "mul",
    NodeKind.DIV: "div",
}

_ELEMENTARY = {
    NodeKind.EXP: "exp",
    NodeKind.LOG: "log",
    NodeKind.COTH: "coth",
}


def _elliptic_integrand(w: complex, c: float) -> complex:
    return cmath.exp(-0.5 * cmath.log(1.0 - 2.0 * c * w * w + w ** 4))


def elliptic_g_value(w: complex, c: float) -> complex:
    """
    Integral of (1 - 2c s^2 + s^4)^(-1/2) along the segment [0, w], by adaptive
    Gauss-Kronrod quadrature of the real and imaginary parts.
    """
    if w == 0:
        return 0j
    parts = []
    for take in (lambda v: v.real, lambda v: v.imag):
        result = integrate.quad(
            lambda s: take(w * _elliptic_integrand(s * w, c)),
            0.0,
            1.0,
            epsabs=QUAD_EPSABS,
            epsrel=QUAD_EPSREL,
            limit=QUAD_LIMIT,
            full_output=1,
        )
        value, abserr = result[0], result[1]
        if len(result) > 3 and abserr > QUAD_ACCEPT * max(1.0, abs(value)):
            raise HypDiskQuadratureError(str(result[3]).splitlines()[0], w)
        parts.append(value)
    return complex(parts[0], parts[1])


def _elliptic_g_jet(arg: Jet3, c: float) -> Jet3:
    w = arg.f
    # g' = q, so (g', g'', g''') is the jet of q at w
    s = jet_var(w)
    q = jet_pow_real(1.0 - 2.0 * c * s * s + s * s * s * s, -0.5)
    return jet_compose(arg, elliptic_g_value(w, c), q.f, q.d1, q.d2)


def _eval(node: Node, x: Jet3, cache: Dict[int, Jet3]) -> Jet3:
    key = id(node)
    if key in cache:
        return cache[key]
    kind = node.kind
    if kind == NodeKind.VAR:
        result = x
    elif kind == NodeKind.CONST:
        result = jet_const(node.value)
    elif kind in _ARITH:
        result = jet_arith(_ARITH[kind], _eval(node.children[0], x, cache), _eval(node.children[1], x, cache))
    elif kind == NodeKind.NEG:
        result = jet_arith("neg", _eval(node.children[0], x, cache))
    elif kind == NodeKind.POW_REAL:
        result = jet_elementary("pow_real", _eval(node.children[0], x, cache), node.exponent)
    elif kind in _ELEMENTARY:
        result = jet_elementary(_ELEMENTARY[kind], _eval(node.children[0], x, cache))
    elif kind == NodeKind.ELLIPTIC_G:
        result = _elliptic_g_jet(_eval(node.children[0], x, cache), node.c)
    else:
        raise ValueError(f"unknown node kind: {kind}")
    cache[key] = result
    return result


def eval_jet(node: Node, z: complex) -> Jet3:
    """
    Jet (phi, phi', phi'', phi''') of the expression at z.

    :param node: expression tree
    :param z: point of the open unit disk
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise HypDiskEvaluationError("point outside the open unit disk", z)
    return _eval(node, jet_var(z), {})


def eval_value(node: Node, z: complex) -> complex:
    return eval_jet(node, z).f


class SelfMapReport(HypDiskModel):
    n_points: int
    max_abs_phi: float
    violations: List[complex]
    # (z, message) for points where evaluation failed
    failures: List[Tuple[complex, str]]

    @property
    def is_self_map(self) -> bool:
        return not self.violations


def check_self_map(node: Node, n_samples: int) -> SelfMapReport:
    """
    Sample |phi| on a polar grid in |z| <= 0.999 and report points with |phi| >= 1.
    Advisory only: a clean report is not a proof that phi maps the disk into itself.

    :param node: expression tree
    :param n_samples: number of radii; 4*n_samples angles per radius
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    radii = np.linspace(0.0, SELF_MAP_RADIUS, n_samples + 1)
    points = polar_grid(radii, 4 * n_samples)
    max_abs = 0.0
    violations: List[complex] = []
    failures: List[Tuple[complex, str]] = []
    for z in points:
        try:
            value = abs(eval_value(node, z))
        except HypDiskNumericError as e:
            log_debug("self-map check: evaluation failed at %r: %s", z, e)
            failures.append((z, str(e)))
            continue
        max_abs = max(max_abs, value)
        if value >= 1.0:
            violations.append(z)
    return SelfMapReport(n_points=len(points), max_abs_phi=max_abs, violations=violations, failures=failures)
