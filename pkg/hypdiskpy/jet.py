"""
Third-order forward-mode differentiation of analytic functions.

A ``Jet3`` carries f, f', f'', f''' at one point. Arithmetic follows the Leibniz
rule, elementary functions are applied through ``jet_compose`` (Faa di Bruno
through order three), so every operator built on top of a jet is exact up to
rounding.
"""

import cmath
from typing import Callable, Tuple, Union

from hypdiskpy.config import FD_STEP, POLE_FLOOR
from hypdiskpy.exception import HypDiskJetError, JetErrorType

Number = Union[int, float, complex]


class Jet3(object):
    __slots__ = ("f", "d1", "d2", "d3")

    def __init__(self, f: Number, d1: Number = 0j, d2: Number = 0j, d3: Number = 0j):
        self.f = complex(f)
        self.d1 = complex(d1)
        self.d2 = complex(d2)
        self.d3 = complex(d3)

    def __repr__(self) -> str:
        return f"Jet3({self.f!r}, {self.d1!r}, {self.d2!r}, {self.d3!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Jet3):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __hash__(self) -> int:
        return hash(self.as_tuple())

    def as_tuple(self) -> Tuple[complex, complex, complex, complex]:
        return self.f, self.d1, self.d2, self.d3

    def __add__(self, other: Union["Jet3", Number]) -> "Jet3":
        if isinstance(other, Jet3):
            return Jet3(self.f + other.f, self.d1 + other.d1, self.d2 + other.d2, self.d3 + other.d3)
        return Jet3(self.f + other, self.d1, self.d2, self.d3)

    def __radd__(self, other: Number) -> "Jet3":
        return self.__add__(other)

    def __neg__(self) -> "Jet3":
        return Jet3(-self.f, -self.d1, -self.d2, -self.d3)

    def __sub__(self, other: Union["Jet3", Number]) -> "Jet3":
        if isinstance(other, Jet3):
            return Jet3(self.f - other.f, self.d1 - other.d1, self.d2 - other.d2, self.d3 - other.d3)
        return Jet3(self.f - other, self.d1, self.d2, self.d3)

    def __rsub__(self, other: Number) -> "Jet3":
        return Jet3(other - self.f, -self.d1, -self.d2, -self.d3)

    def __mul__(self, other: Union["Jet3", Number]) -> "Jet3":
        if isinstance(other, Jet3):
            f, f1, f2, f3 = self.as_tuple()
            g, g1, g2, g3 = other.as_tuple()
            return Jet3(
                f * g,
                f1 * g + f * g1,
                f2 * g + 2.0 * f1 * g1 + f * g2,
                f3 * g + 3.0 * f2 * g1 + 3.0 * f1 * g2 + f * g3,
            )
        return Jet3(self.f * other, self.d1 * other, self.d2 * other, self.d3 * other)

    def __rmul__(self, other: Number) -> "Jet3":
        return self.__mul__(other)

    def reciprocal(self) -> "Jet3":
        u = self.f
        if abs(u) < POLE_FLOOR:
            raise HypDiskJetError(JetErrorType.POLE, u, op="div")
        inv = 1.0 / u
        return jet_compose(self, inv, -inv * inv, 2.0 * inv ** 3, -6.0 * inv ** 4)

    def __truediv__(self, other: Union["Jet3", Number]) -> "Jet3":
        if isinstance(other, Jet3):
            return self * other.reciprocal()
        if abs(other) < POLE_FLOOR:
            raise HypDiskJetError(JetErrorType.POLE, complex(other), op="div")
        return self * (1.0 / other)

    def __rtruediv__(self, other: Number) -> "Jet3":
        return self.reciprocal() * other


def jet_var(z: Number) -> Jet3:
    """
    Jet of the identity variable at z: (z, 1, 0, 0).
    """
    return Jet3(z, 1.0, 0.0, 0.0)


def jet_const(c: Number) -> Jet3:
    return Jet3(c, 0.0, 0.0, 0.0)


def jet_compose(g: Jet3, h0: complex, h1: complex, h2: complex, h3: complex) -> Jet3:
    """
    Jet of h(g(z)) given h and its first three derivatives evaluated at g.f.

    :param g: inner jet
    :param h0: h(g.f)
    :param h1: h'(g.f)
    :param h2: h''(g.f)
    :param h3: h'''(g.f)
    """
    g1, g2, g3 = g.d1, g.d2, g.d3
    return Jet3(
        h0,
        h1 * g1,
        h2 * g1 * g1 + h1 * g2,
        h3 * g1 ** 3 + 3.0 * h2 * g1 * g2 + h1 * g3,
    )


def jet_arith(op: str, a: Jet3, b: Jet3 = None) -> Jet3:
    """
    Combine two jets with one of ``add``, ``sub``, ``mul``, ``div`` or negate ``a``
    with ``neg``.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    raise ValueError(f"unknown jet operation: {op}")


def _on_branch_cut(u: complex) -> bool:
    return u.imag == 0.0 and u.real <= 0.0


def jet_exp(a: Jet3) -> Jet3:
    e = cmath.exp(a.f)
    return jet_compose(a, e, e, e, e)


def jet_log(a: Jet3) -> Jet3:
    u = a.f
    if abs(u) < POLE_FLOOR:
        raise HypDiskJetError(JetErrorType.POLE, u, op="log")
    if _on_branch_cut(u):
        raise HypDiskJetError(JetErrorType.BRANCH_CUT, u, op="log")
    inv = 1.0 / u
    return jet_compose(a, cmath.log(u), inv, -inv * inv, 2.0 * inv ** 3)


def jet_pow_real(a: Jet3, p: float) -> Jet3:
    """
    Principal branch of a**p for a real exponent p. Non-negative integer exponents
    are entire and negative integer ones only have a pole at 0, so neither checks
    the cut.
    """
    u = a.f
    p = float(p)
    if p.is_integer():
        n = int(p)
        if n < 0 and abs(u) < POLE_FLOOR:
            raise HypDiskJetError(JetErrorType.POLE, u, op="pow")
        coeffs = (1.0, float(n), float(n * (n - 1)), float(n * (n - 1) * (n - 2)))
        hs = []
        for k, c in enumerate(coeffs):
            if c == 0.0:
                hs.append(0j)
            else:
                hs.append(c * u ** (n - k))
        return jet_compose(a, *hs)
    if abs(u) < POLE_FLOOR:
        raise HypDiskJetError(JetErrorType.POLE, u, op="pow")
    if _on_branch_cut(u):
        raise HypDiskJetError(JetErrorType.BRANCH_CUT, u, op="pow")
    h0 = cmath.exp(p * cmath.log(u))
    inv = 1.0 / u
    h1 = p * h0 * inv
    h2 = (p - 1.0) * h1 * inv
    h3 = (p - 2.0) * h2 * inv
    return jet_compose(a, h0, h1, h2, h3)


def jet_coth(a: Jet3) -> Jet3:
    u = a.f
    s = cmath.sinh(u)
    if abs(s) < POLE_FLOOR:
        raise HypDiskJetError(JetErrorType.POLE, u, op="coth")
    c = cmath.cosh(u) / s
    h1 = 1.0 - c * c
    return jet_compose(a, c, h1, -2.0 * c * h1, h1 * (6.0 * c * c - 2.0))


def jet_elementary(fn: str, a: Jet3, param: float = None) -> Jet3:
    """
    Apply ``exp``, ``log``, ``pow_real`` (exponent ``param``) or ``coth`` to a jet.
    """
    if fn == "exp":
        return jet_exp(a)
    if fn == "log":
        return jet_log(a)
    if fn == "pow_real":
        return jet_pow_real(a, param)
    if fn == "coth":
        return jet_coth(a)
    raise ValueError(f"unknown elementary function: {fn}")


def fd_jet_oracle(f: Callable[[complex], complex], z: complex, h: float = FD_STEP) -> Jet3:
    """
    Finite-difference estimate of the jet of an analytic ``f`` at ``z``.

    Each derivative order n uses a 5-point stencil on the circle
    ``z + r_n * exp(2*pi*i*k/5)``, a discrete Cauchy integral, with radius
    ``r_n = h ** ((n + 1) / (2 * n))`` (h, h**0.75, h**(2/3)) to balance
    truncation against rounding. The stencil must stay inside the domain of f.
    """
    if h <= 0.0:
        raise ValueError("h must be positive")
    roots = [cmath.exp(2j * cmath.pi * k / 5.0) for k in range(5)]
    value = complex(f(z))
    derivs = []
    factorial = 1.0
    for n in (1, 2, 3):
        factorial *= n
        r = h ** ((n + 1.0) / (2.0 * n))
        acc = 0j
        for w in roots:
            acc += complex(f(z + r * w)) * w ** (-n)
        derivs.append(factorial * acc / (5.0 * r ** n))
    return Jet3(value, *derivs)
