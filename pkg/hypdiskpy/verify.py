"""
Acceptance suites: closed forms of the four example maps, finite-difference
oracles for the jets and the operators, Moebius invariance, trajectory and
level-set behaviour, and the critical-point criterion.

Every suite uses fixed random seeds, so repeated runs print identical reports.
"""

import cmath
import math
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy import special

from hypdiskpy.config import FD_STEP
from hypdiskpy.crit import (
    Classification,
    CriticalKind,
    classify,
    critical_points,
    find_A_zeros,
    local_expansion,
    saddle_branch_check,
)
from hypdiskpy.expr import Node, builtin, elliptic_g_value, elliptic_k, eval_jet, eval_value, parse, substitute
from hypdiskpy.flow import Direction, TraceOptions, growth_bound_check, level_drift, trace_trajectory
from hypdiskpy.hypops import a_operator, evaluate, hessian_absD, hyp_derivative, laplacian_log_absD, wirtinger_A
from hypdiskpy.jet import Jet3, fd_jet_oracle, jet_elementary, jet_exp, jet_log, jet_var
from hypdiskpy.levels import LevelOptions, components, nesting_gap
from hypdiskpy.log import log_info
from hypdiskpy.model import HypDiskModel, ResultList
from hypdiskpy.util import random_disk_points, relative_error

SUITES = ("jets", "operators", "flow", "levels", "critical", "examples")

K_SQRT_HALF = 1.854074677301372


class VerifyCheck(HypDiskModel):
    suite: str
    name: str
    measured: float
    # bound the measured value is compared against with ``relation``
    tolerance: float
    relation: str = "<"
    passed: bool


class _Collector(object):
    def __init__(self, suite: str):
        self.suite = suite
        self.checks: List[VerifyCheck] = []

    def _add(self, name: str, measured: float, tolerance: float, relation: str, passed: bool) -> None:
        self.checks.append(
            VerifyCheck(
                suite=self.suite,
                name=name,
                measured=float(measured),
                tolerance=float(tolerance),
                relation=relation,
                passed=bool(passed),
            )
        )

    def below(self, name: str, measured: float, tolerance: float) -> None:
        self._add(name, measured, tolerance, "<", measured < tolerance)

    def at_least(self, name: str, measured: float, bound: float) -> None:
        self._add(name, measured, bound, ">=", measured >= bound)

    def equal(self, name: str, measured: float, expected: float) -> None:
        self._add(name, measured, expected, "==", measured == expected)


def _maps() -> List[Tuple[str, Node]]:
    return [
        ("example1", builtin("example1", a=0.5)),
        ("example2", builtin("example2", a=0.5)),
        ("example3", builtin("example3", theta=math.pi / 4)),
        ("example4", builtin("example4", c=0.6)),
        ("mobius", builtin("mobius", a_re=0.3, a_im=-0.2, theta=0.7)),
    ]


def _fd_wirtinger(f: Callable[[complex], complex], z: complex, h: float = FD_STEP) -> Tuple[complex, complex]:
    fx = (f(z + h) - f(z - h)) / (2.0 * h)
    fy = (f(z + 1j * h) - f(z - 1j * h)) / (2.0 * h)
    return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)


def _fd_hessian(f: Callable[[complex], float], z: complex, h: float = FD_STEP) -> Tuple[complex, float]:
    f0 = f(z)
    fxx = (f(z + h) - 2.0 * f0 + f(z - h)) / (h * h)
    fyy = (f(z + 1j * h) - 2.0 * f0 + f(z - 1j * h)) / (h * h)
    fxy = (f(z + h + 1j * h) - f(z + h - 1j * h) - f(z - h + 1j * h) + f(z - h - 1j * h)) / (4.0 * h * h)
    return 0.25 * (fxx - fyy - 2j * fxy), 0.25 * (fxx + fyy)


def _jet_error(jet: Jet3, oracle: Jet3) -> float:
    return max(relative_error(a, b) for a, b in zip(jet.as_tuple(), oracle.as_tuple()))


def _circular_distance(a: float, b: float) -> float:
    d = (a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def _fit_circle(points: List[complex]) -> Tuple[complex, float]:
    """
    Algebraic least-squares circle x^2 + y^2 + Dx + Ey + F = 0 through the points.
    """
    x = np.array([p.real for p in points])
    y = np.array([p.imag for p in points])
    mat = np.column_stack([x, y, np.ones_like(x)])
    (d, e, f), *_ = np.linalg.lstsq(mat, -(x * x + y * y), rcond=None)
    center = complex(-d / 2.0, -e / 2.0)
    return center, math.sqrt(abs(center) ** 2 - f)


# --- suites


def _jets(out: _Collector) -> None:
    rng = np.random.default_rng(1)
    scalar = {
        "exp": (cmath.exp, 0.0, None),
        "log": (cmath.log, 1.5, None),
        "pow_real(0.5)": (lambda u: u ** 0.5, 1.5, 0.5),
        "pow_real(-1.5)": (lambda u: u ** -1.5, 1.5, -1.5),
        "pow_real(3)": (lambda u: u ** 3, 1.5, 3.0),
        "coth": (lambda u: 1.0 / cmath.tanh(u), 1.2, None),
    }
    for label, (fn, shift, param) in scalar.items():
        name = label.split("(")[0]
        err = 0.0
        for z in random_disk_points(rng, 10, r_max=0.5):
            u = shift + z
            err = max(err, _jet_error(jet_elementary(name, jet_var(u), param), fd_jet_oracle(fn, u)))
        out.below(f"{label} vs finite differences", err, 1e-6)

    err = 0.0
    for z in random_disk_points(rng, 10, r_max=0.9):
        a = jet_var(z)
        err = max(err, _jet_error(jet_exp(a) * (a * a), fd_jet_oracle(lambda x: cmath.exp(x) * x * x, z)))
    out.below("Leibniz product exp(z)*z^2", err, 1e-6)

    err_quot = err_log = 0.0
    for z in random_disk_points(rng, 10, r_max=0.9):
        a = jet_var(1.5 + z)
        err_quot = max(err_quot, _jet_error(jet_exp(a) / jet_exp(a), Jet3(1.0)))
        err_log = max(err_log, _jet_error(jet_exp(jet_log(a)), a))
    out.below("f/f = 1", err_quot, 1e-12)
    out.below("exp(log(u)) = u", err_log, 1e-12)

    for label, phi in _maps():
        if label == "example3":
            continue
        err = 0.0
        for z in random_disk_points(rng, 10, r_max=0.6):
            err = max(err, _jet_error(eval_jet(phi, z), fd_jet_oracle(lambda x: eval_value(phi, x), z)))
        out.below(f"{label} tree jet vs finite differences", err, 1e-6)


def _operators(out: _Collector) -> None:
    rng = np.random.default_rng(2)
    for label, phi in _maps():

        def log_abs_d(x: complex) -> float:
            return math.log(abs(hyp_derivative(phi, x)))

        def abs_d(x: complex) -> float:
            return abs(hyp_derivative(phi, x))

        def a_of(x: complex) -> complex:
            return a_operator(phi, x)

        err_a = err_w = err_h = err_l = 0.0
        for z in random_disk_points(rng, 100, r_max=0.8, r_min=0.2):
            w = 1.0 - abs(z) ** 2
            fd_z, _ = _fd_wirtinger(log_abs_d, z)
            err_a = max(err_a, relative_error(a_operator(phi, z), w * fd_z))
            A_z, A_zbar = wirtinger_A(phi, z)
            fd_Az, fd_Azbar = _fd_wirtinger(a_of, z)
            err_w = max(err_w, relative_error(A_z, fd_Az), relative_error(A_zbar, fd_Azbar))
            d2_zz, d2_zzbar = hessian_absD(phi, z)
            fd_zz, fd_zzbar = _fd_hessian(abs_d, z)
            err_h = max(err_h, relative_error(d2_zz, fd_zz), relative_error(d2_zzbar, fd_zzbar))
            _, fd_lap = _fd_hessian(log_abs_d, z)
            err_l = max(err_l, relative_error(laplacian_log_absD(phi, z), fd_lap))
        out.below(f"{label} A vs (1-|z|^2) d log|D|/dz", err_a, 1e-5)
        out.below(f"{label} Wirtinger derivatives of A", err_w, 1e-5)
        out.below(f"{label} Hessian of |D|", err_h, 1e-4)
        out.below(f"{label} Laplacian of log|D|", err_l, 1e-3)

    _invariance(out)


def _random_mobius(rng: np.random.Generator) -> Node:
    a = random_disk_points(rng, 1, r_max=0.5)[0]
    return builtin("mobius", a_re=a.real, a_im=a.imag, theta=float(rng.uniform(0.0, 2.0 * math.pi)))


def _invariance(out: _Collector) -> None:
    rng = np.random.default_rng(3)
    for label, phi in _maps()[:4]:
        err_abs = err_post = err_pre = 0.0
        for _ in range(50):
            sigma, tau = _random_mobius(rng), _random_mobius(rng)
            z = random_disk_points(rng, 1, r_max=0.6)[0]
            tau_jet = eval_jet(tau, z)
            rotation = tau_jet.d1 / abs(tau_jet.d1)
            inner_D = hyp_derivative(phi, tau_jet.f)
            inner_A = a_operator(phi, tau_jet.f)
            both = substitute(substitute(sigma, phi), tau)
            err_abs = max(err_abs, relative_error(abs(hyp_derivative(both, z)), abs(inner_D)))
            err_post = max(err_post, relative_error(a_operator(substitute(sigma, phi), z), a_operator(phi, z)))
            err_pre = max(err_pre, relative_error(a_operator(substitute(phi, tau), z), rotation * inner_A))
        out.below(f"{label} |D| of sigma∘phi∘tau", err_abs, 1e-10)
        out.below(f"{label} A of sigma∘phi equals A of phi", err_post, 1e-10)
        out.below(f"{label} A of phi∘tau is the rotated A of phi", err_pre, 1e-10)

    worst_a = worst_d = 0.0
    for _ in range(50):
        tau = _random_mobius(rng)
        for z in random_disk_points(rng, 10, r_max=0.9):
            point = evaluate(tau, z)
            worst_a = max(worst_a, abs(point.A))
            worst_d = max(worst_d, abs(point.absD - 1.0))
    out.below("automorphisms have A = 0", worst_a, 1e-12)
    out.below("automorphisms have |D| = 1", worst_d, 1e-12)


def _flow(out: _Collector) -> None:
    phi4 = builtin("example4", c=0.6)
    traj = trace_trajectory(phi4, 0.2, TraceOptions(direction=Direction.FORWARD, t_max=0.99))
    radial = max(abs(abs(s.z) - s.t / (1.0 + math.sqrt(1.0 - s.t * s.t))) for s in traj.samples)
    out.below("example4 trajectory |z(t)| = t/(1+sqrt(1-t^2))", radial, 1e-6)
    out.at_least("example4 trajectory reaches t = 0.99", traj.omega_plus_est, 0.99)
    kappa = max(abs(s.kappa) for s in traj.samples if not math.isnan(s.kappa))
    out.below("example4 trajectory curvature", kappa, 1e-6)
    out.at_least("example4 min|A| decrease factor", traj.samples[0].absA / min(s.absA for s in traj.samples), 10.0)

    phi1 = builtin("example1", a=0.5)
    axis = trace_trajectory(phi1, 0.0, TraceOptions(direction=Direction.FORWARD))
    out.below("example1 trajectory from 0 stays real", max(abs(s.z.imag) for s in axis.samples), 1e-9)
    out.at_least("example1 trajectory from 0 reaches |D| >= a - 1e-3", axis.omega_plus_est, 0.5 - 1e-3)
    out.at_least("example1 min|A| decrease factor", axis.samples[0].absA / min(s.absA for s in axis.samples), 10.0)

    worst = 0.0
    for k in range(8):
        start = 0.3 * cmath.exp(2j * math.pi * k / 8)
        fan = trace_trajectory(phi1, start, TraceOptions(direction=Direction.FORWARD))
        worst = max(worst, abs(fan.samples[-1].z + 1.0))
    out.below("example1 fan endpoints near -1", worst, 0.05)

    starts = {
        "example1": 0.1j,
        "example2": 0.3j,
        "example3": 0.3 + 0.2j,
        "example4": 0.2,
    }
    for label, phi in _maps()[:4]:
        t = trace_trajectory(phi, starts[label], TraceOptions(direction=Direction.BOTH))
        result = growth_bound_check(t)
        out.at_least(f"{label} growth bound log(t/t0) - 2 min|A| d", result.lhs - result.rhs, -1e-9)
        out.below(f"{label} level drift", level_drift(t), TraceOptions().level_tol * (1.0 + 1e-9))


def _levels(out: _Collector) -> None:
    phi4 = builtin("example4", c=0.6)
    curves = components(phi4, 0.8)
    out.equal("example4 t=0.8 component count", len(curves), 1)
    if len(curves) == 1:
        out.equal("example4 t=0.8 curve is closed", float(curves[0].closed), 1.0)
        radius = max(abs(abs(z) - 0.5) for z in curves[0].vertices)
        out.below("example4 t=0.8 curve is the circle |z| = 0.5", radius, 1e-8)

    phi2 = builtin("example2", a=0.5)
    arcs = components(phi2, 0.25)
    out.equal("example2 t=0.25 component count", len(arcs), 2)
    for k, arc in enumerate(arcs):
        center, r = _fit_circle(arc.vertices)
        off = max(abs(abs(1.0 - center) - r), abs(abs(-1.0 - center) - r))
        out.below(f"example2 t=0.25 arc {k} is a circle through +-1", off, 1e-3)
    out.equal("example2 t=0.99 component count", len(components(phi2, 0.99)), 0)

    phi1 = builtin("example1", a=0.5)
    out.equal("example1 t=0.25 component count", len(components(phi1, 0.25)), 1)

    low, high = components(phi1, 0.2), components(phi1, 0.3)
    gap = nesting_gap(low, high)
    out.equal("example1 levels t=0.2 and t=0.3 have interiors", float(gap is not None), 1.0)
    if gap is not None:
        out.at_least("example1 levels t=0.2 and t=0.3 do not meet", gap, LevelOptions().step / 2.0)

    # |D| runs from |D(0)| ~ 0.4255 up to a = 0.5 along the axis
    axis = trace_trajectory(phi1, 0.0, TraceOptions(direction=Direction.FORWARD))
    above = np.sign(np.array([s.absD for s in axis.samples]) - 0.45)
    out.equal("example1 trajectory crosses t=0.45 once", int(np.count_nonzero(np.diff(above))), 1)


def _critical(out: _Collector) -> None:
    out.below("K(sqrt(2)/2) by AGM", abs(elliptic_k(math.sqrt(0.5)) - K_SQRT_HALF), 1e-9)
    out.below("AGM vs scipy ellipk", abs(elliptic_k(math.sqrt(0.5)) - float(special.ellipk(0.5))), 1e-14)

    for label, theta in (("pi/6", math.pi / 6), ("pi/4", math.pi / 4), ("pi/3", math.pi / 3)):
        phi = builtin("example3", theta=theta)
        zeros = find_A_zeros(phi, grid_density=8)
        at_origin = [p for p in zeros if abs(p.z) < 1e-10]
        out.equal(f"example3({label}) A zero at 0", len(at_origin), 1)
        if not at_origin:
            continue
        cp = at_origin[0]
        out.at_least(f"example3({label}) lhs - rhs", cp.lhs - cp.rhs, 0.0)
        out.equal(f"example3({label}) saddle", float(cp.classification == Classification.SADDLE), 1.0)
        if cp.classification != Classification.SADDLE:
            continue
        check = saddle_branch_check(phi, cp, 1e-2)
        out.equal(f"example3({label}) sign changes on r=1e-2", check.crossing_count, 4)
        mismatch = max(min(_circular_distance(a, m) for m in check.measured_angles) for a in cp.branch_angles)
        out.below(f"example3({label}) branch angles", mismatch, 0.05)

    a = 0.5
    phi2 = builtin("example2", a=a)
    worst_a = worst_d = worst_gap = 0.0
    degenerate = 0
    for x in np.linspace(-0.9, 0.9, 20):
        point = evaluate(phi2, complex(x))
        worst_a = max(worst_a, abs(point.A))
        worst_d = max(worst_d, abs(point.absD - a))
        cp = classify(phi2, complex(x))
        worst_gap = max(worst_gap, abs(cp.lhs - cp.rhs))
        degenerate += cp.classification == Classification.DEGENERATE
    out.below("example2 |A| on (-1, 1)", worst_a, 1e-10)
    out.below("example2 |D| = a on (-1, 1)", worst_d, 1e-12)
    out.below("example2 |lhs - rhs| on (-1, 1)", worst_gap, 1e-9)
    out.equal("example2 degenerate points on (-1, 1)", degenerate, 20)

    phi1 = builtin("example1", a=0.5)
    out.equal("example1 A zeros at grid density 64", len(find_A_zeros(phi1, grid_density=64)), 0)

    points = critical_points(builtin("example4", c=0.6))
    minima = [p for p in points if p.kind == CriticalKind.PHI_PRIME_ZERO and abs(p.z) < 1e-10]
    out.equal("example4 critical points", len(points), 1)
    out.equal("example4 local minimum at 0", len(minima), 1)

    phi = parse("0.5*z")
    cp = classify(phi, 0j)
    out.equal("0.5*z strict local max at 0", float(cp.classification == Classification.STRICT_LOCAL_MAX), 1.0)
    ring = max(evaluate(phi, 1e-3 * cmath.exp(2j * math.pi * k / 16)).absD for k in range(16))
    out.at_least("0.5*z |D(0)| - max |D| on r=1e-3", cp.absD - ring, 0.0)

    _expansion_order(out)


def _expansion_order(out: _Collector) -> None:
    rng = np.random.default_rng(4)
    maps = _maps()[:4]
    directions = [cmath.exp(2j * math.pi * k / 8) for k in range(8)]
    worst = math.inf
    for i in range(10):
        _, phi = maps[i % len(maps)]
        z0 = random_disk_points(rng, 1, r_max=0.6, r_min=0.2)[0]
        errors = []
        for r in (1e-2, 5e-3):
            errors.append(
                max(abs(evaluate(phi, z0 + r * u).absD - local_expansion(phi, z0, z0 + r * u)) for u in directions)
            )
        worst = min(worst, math.log2(errors[0] / errors[1]))
    out.at_least("second-order expansion error order", worst, 2.7)


def _examples(out: _Collector) -> None:
    rng = np.random.default_rng(5)

    c = 0.6
    phi4 = builtin("example4", c=c)
    err_d = err_a = err_s = err_w = 0.0
    for z in random_disk_points(rng, 200, r_max=0.9, r_min=0.01):
        point = evaluate(phi4, z)
        r2 = abs(z) ** 2
        err_d = max(err_d, relative_error(point.absD, 2.0 * abs(z) / (1.0 + r2), floor=0.0))
        err_a = max(err_a, relative_error(point.A, (1.0 - r2) ** 2 / (2.0 * z * (1.0 + r2)), floor=0.0))
        err_s = max(err_s, relative_error(point.S, -3.0 / (2.0 * z * z), floor=0.0))
        ratio = (1.0 - r2) / (1.0 - abs(point.phi) ** 2)
        err_w = max(err_w, relative_error(ratio, abs(1.0 - c * c * z * z) ** 2 / ((1.0 - c ** 4) * (1.0 + r2))))
    out.below("example4 |D| = 2|z|/(1+|z|^2)", err_d, 1e-12)
    out.below("example4 A = (1-|z|^2)^2/(2z(1+|z|^2))", err_a, 1e-12)
    out.below("example4 S = -3/(2z^2)", err_s, 1e-10)
    out.below("example4 (1-|z|^2)/(1-|phi|^2)", err_w, 1e-12)

    a = 0.5
    phi1, phi2 = builtin("example1", a=a), builtin("example2", a=a)
    errs = {"1D": 0.0, "1A": 0.0, "1S": 0.0, "2D": 0.0, "2A": 0.0, "2S": 0.0}
    for z in random_disk_points(rng, 100, r_max=0.8):
        w = 1.0 - abs(z) ** 2
        q = 1.0 - z * z
        g = ((1.0 + z) / (1.0 - z)) ** a
        s_g = 2.0 * (1.0 - a * a) / (q * q)

        p1 = evaluate(phi1, z)
        errs["1D"] = max(errs["1D"], relative_error(p1.absD, a * w * abs(g) / (abs(q) * math.sinh(g.real))))
        coth = 1.0 / math.tanh(g.real)
        a1 = (a * w + 2j * z.imag) / q - a * w / q * g * coth
        errs["1A"] = max(errs["1A"], relative_error(p1.A, a1))
        errs["1S"] = max(errs["1S"], relative_error(p1.S, 2.0 * (1.0 - a * a - a * a * g * g) / (q * q)))

        p2 = evaluate(phi2, z)
        errs["2D"] = max(errs["2D"], relative_error(p2.absD, a * w * abs(g) / (abs(q) * g.real)))
        a2 = w / q * (a - a * g / g.real + z) - z.conjugate()
        errs["2A"] = max(errs["2A"], relative_error(p2.A, a2))
        errs["2S"] = max(errs["2S"], relative_error(p2.S, s_g))
    out.below("example1 |D| closed form", errs["1D"], 1e-10)
    out.below("example1 A closed form", errs["1A"], 1e-10)
    out.below("example1 S = 2(1-a^2-a^2 g^2)/(1-z^2)^2", errs["1S"], 1e-10)
    out.below("example2 |D| closed form", errs["2D"], 1e-10)
    out.below("example2 A closed form", errs["2A"], 1e-10)
    out.below("example2 S = 2(1-a^2)/(1-z^2)^2", errs["2S"], 1e-10)

    worst = 0.0
    for y in np.linspace(-0.9, 0.9, 19):
        theta = math.atan(y)
        expected = a * math.cos(2.0 * theta) / math.cos(2.0 * a * theta)
        worst = max(worst, abs(evaluate(phi2, complex(0.0, y)).absD - expected))
    out.below("example2 |D(iy)| = a cos(2 arctan y)/cos(2a arctan y)", worst, 1e-10)

    for label, theta in (("pi/6", math.pi / 6), ("pi/4", math.pi / 4), ("pi/3", math.pi / 3)):
        cc = math.cos(2.0 * theta)
        alpha = math.pi / (2.0 * elliptic_k(math.cos(theta)))
        phi3 = builtin("example3", theta=theta)
        err_d = err_s = 0.0
        for z in random_disk_points(rng, 20, r_max=0.7):
            point = evaluate(phi3, z)
            p = 1.0 - 2.0 * cc * z * z + z ** 4
            g = elliptic_g_value(z, cc)
            expected_d = alpha * (1.0 - abs(z) ** 2) / abs(cmath.sqrt(p)) / math.cos(2.0 * alpha * g.real)
            err_d = max(err_d, relative_error(point.absD, expected_d))
            num = (cc + alpha ** 2) + (cc * cc - 2.0 * alpha ** 2 * cc - 3.0) * z * z + (cc + alpha ** 2) * z ** 4
            err_s = max(err_s, relative_error(point.S, 2.0 * num / (p * p)))
        out.below(f"example3({label}) |D| closed form", err_d, 1e-9)
        out.below(f"example3({label}) S closed form", err_s, 1e-9)


_RUNNERS: Dict[str, Callable[[_Collector], None]] = {
    "jets": _jets,
    "operators": _operators,
    "flow": _flow,
    "levels": _levels,
    "critical": _critical,
    "examples": _examples,
}


def run_suite(name: str) -> ResultList[VerifyCheck]:
    """
    Run one acceptance suite, or all of them in a fixed order for ``"all"``.

    :raises ValueError: unknown suite name
    """
    names = list(SUITES) if name == "all" else [name]
    checks: List[VerifyCheck] = []
    for suite in names:
        runner = _RUNNERS.get(suite)
        if runner is None:
            raise ValueError(f"unknown suite {suite!r}, expected one of all, {', '.join(SUITES)}")
        log_info("verify: running %s", suite)
        out = _Collector(suite)
        runner(out)
        checks.extend(out.checks)
    return ResultList(checks)


def format_check(check: VerifyCheck) -> str:
    status = "PASS" if check.passed else "FAIL"
    return f"{status} {check.suite}: {check.name}: measured {check.measured:.3e} {check.relation} {check.tolerance:.3e}"
