"""
Command line: ``hypdisk [--log-level L] [--scenario FILE] <command> ...``

Exit status: 0 success, 1 usage or parse error, 2 numeric failure,
3 verification failure. Complex numbers are written ``a+bi`` without spaces;
put ``--`` before a start such as ``-0.2i`` that begins with a minus sign.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from hypdiskpy.config import (
    BOUNDARY_MARGIN,
    CLASS_TOL,
    CRITICAL_GRID_DENSITY,
    LEVEL_GRID_DENSITY,
    LEVEL_STEP,
    LEVEL_TOL,
    MAX_STEPS,
    MAX_T_STEP,
    MAX_TURN,
    NEWTON_TOL,
    RK_RTOL,
    SVG_WIDTH_PX,
)
from hypdiskpy.crit import critical_frame, write_critical_report
from hypdiskpy.disk import HypDisk
from hypdiskpy.exception import HypDiskNumericError, HypDiskParseError
from hypdiskpy.flow import Direction, TraceOptions
from hypdiskpy.levels import LevelOptions
from hypdiskpy.log import setup_logging
from hypdiskpy.model import ValueFlag
from hypdiskpy.render import RenderOptions, render_files
from hypdiskpy.runner import LevelRunner, TrajectoryRunner
from hypdiskpy.scenario import ScenarioLoader
from hypdiskpy.util import format_complex, format_real, parse_complex
from hypdiskpy.verify import SUITES, format_check, run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_VERIFY = 3


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="hypdisk", description="Hyperbolic derivative of analytic self-maps of the unit disk")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--scenario", help="key = value file with one [section] per command")
    sub = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)

    p = sub.add_parser("eval", help="all operators at one point")
    p.add_argument("function", nargs="?")
    p.add_argument("z", nargs="?", type=_complex_arg)

    p = sub.add_parser("trajectory", help="trace orthogonal trajectories of the level sets")
    p.add_argument("function", nargs="?")
    p.add_argument("starts", nargs="*", type=_complex_arg)
    p.add_argument("--direction", choices=[d.value for d in Direction])
    p.add_argument("--level-tol", type=float, help=f"default {LEVEL_TOL}")
    p.add_argument("--max-steps", type=int, help=f"default {MAX_STEPS}")
    p.add_argument("--boundary-margin", type=float, help=f"default {BOUNDARY_MARGIN}")
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--max-step", type=float, help=f"default {MAX_T_STEP}")
    p.add_argument("--rtol", type=float, help=f"default {RK_RTOL}")
    p.add_argument("--out-dir")

    p = sub.add_parser("level", help="trace all components of level sets")
    p.add_argument("function", nargs="?")
    p.add_argument("levels", nargs="*", type=float)
    p.add_argument("--grid-density", type=int, help=f"default {LEVEL_GRID_DENSITY}")
    p.add_argument("--step", type=float, help=f"default {LEVEL_STEP}")
    p.add_argument("--level-tol", type=float, help=f"default {LEVEL_TOL}")
    p.add_argument("--max-steps", type=int, help=f"default {MAX_STEPS}")
    p.add_argument("--boundary-margin", type=float, help=f"default {BOUNDARY_MARGIN}")
    p.add_argument("--max-turn", type=float, help=f"default {MAX_TURN}")
    p.add_argument("--out-dir")

    p = sub.add_parser("critical", help="find and classify critical points of |D|")
    p.add_argument("function", nargs="?")
    p.add_argument("--grid-density", type=int, help=f"default {CRITICAL_GRID_DENSITY}")
    p.add_argument("--newton-tol", type=float, help=f"default {NEWTON_TOL}")
    p.add_argument("--class-tol", type=float, help=f"default {CLASS_TOL}")
    p.add_argument("--out")

    p = sub.add_parser("render", help="SVG plot of trajectory, level and critical-point CSVs")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--out")
    p.add_argument("--width-px", type=int, help=f"default {SVG_WIDTH_PX}")
    p.add_argument("--no-disk", action="store_true")
    p.add_argument("--level-color")
    p.add_argument("--trajectory-color")
    p.add_argument("--critical-color")

    p = sub.add_parser("verify", help="run an acceptance suite")
    p.add_argument("suite", nargs="?")
    return parser


def _merge_scenario(args: argparse.Namespace) -> None:
    """
    Fill options not given on the command line from the scenario section of the command.
    """
    if not args.scenario:
        return
    scenario = ScenarioLoader().load(args.scenario, args.command)
    for key, value in scenario.model_dump(exclude={"command"}).items():
        if not hasattr(args, key) or value is None or value == []:
            continue
        if getattr(args, key) in (None, []):
            setattr(args, key, value.value if isinstance(value, Direction) else value)


def _pick(value, default):
    return default if value is None else value


def _disk(args: argparse.Namespace) -> HypDisk:
    if not args.function:
        raise UsageError(f"{args.command}: no function given")
    return HypDisk(args.function)


def _optional(value, fmt) -> str:
    return "undefined" if value is None else fmt(value)


def cmd_eval(args: argparse.Namespace) -> int:
    disk = _disk(args)
    if args.z is None:
        raise UsageError("eval: no point given")
    point = disk.evaluate(args.z)
    print(f"z = {format_complex(point.z)}")
    print(f"phi = {format_complex(point.phi)}")
    print(f"D = {format_complex(point.D)}")
    print(f"|D| = {format_real(point.absD)}")
    print(f"A = {'INF' if point.A == ValueFlag.INFINITE else format_complex(point.A)}")
    print(f"S = {_optional(point.S, format_complex)}")
    print(f"grad|D| = {_optional(point.grad, format_complex)}")
    print(f"curvature = {_optional(point.curvature, format_real)}")
    return EXIT_OK


def cmd_trajectory(args: argparse.Namespace) -> int:
    disk = _disk(args)
    if not args.starts:
        raise UsageError("trajectory: no start points given")
    opts = TraceOptions(
        direction=Direction(_pick(args.direction, Direction.BOTH.value)),
        level_tol=_pick(args.level_tol, LEVEL_TOL),
        max_steps=_pick(args.max_steps, MAX_STEPS),
        boundary_margin=_pick(args.boundary_margin, BOUNDARY_MARGIN),
        t_min=args.t_min,
        t_max=args.t_max,
        max_step=_pick(args.max_step, MAX_T_STEP),
        rtol=_pick(args.rtol, RK_RTOL),
    )
    runner = TrajectoryRunner(disk, opts)
    runner.run(args.starts)
    out_dir = _pick(args.out_dir, ".")
    runner.export_csv(out_dir)
    runner.save_failures(os.path.join(out_dir, "trajectory_failures.csv"))
    runner.print_summary()
    return EXIT_OK if runner.trajectories else EXIT_NUMERIC


def cmd_level(args: argparse.Namespace) -> int:
    disk = _disk(args)
    if not args.levels:
        raise UsageError("level: no levels given")
    bad = [t for t in args.levels if not 0.0 < t < 1.0]
    if bad:
        raise UsageError(f"level: levels must lie in (0, 1), got {bad}")
    opts = LevelOptions(
        step=_pick(args.step, LEVEL_STEP),
        level_tol=_pick(args.level_tol, LEVEL_TOL),
        max_steps=_pick(args.max_steps, MAX_STEPS),
        boundary_margin=_pick(args.boundary_margin, BOUNDARY_MARGIN),
        max_turn=_pick(args.max_turn, MAX_TURN),
    )
    runner = LevelRunner(disk, _pick(args.grid_density, LEVEL_GRID_DENSITY), opts)
    runner.run(args.levels)
    out_dir = _pick(args.out_dir, ".")
    runner.export_csv(out_dir)
    runner.save_failures(os.path.join(out_dir, "level_failures.csv"))
    runner.print_summary()
    return EXIT_OK


def cmd_critical(args: argparse.Namespace) -> int:
    disk = _disk(args)
    points = disk.critical.all(
        grid_density=_pick(args.grid_density, CRITICAL_GRID_DENSITY),
        newton_tol=_pick(args.newton_tol, NEWTON_TOL),
        class_tol=_pick(args.class_tol, CLASS_TOL),
    )
    print(f"{len(points)} critical points")
    if len(points):
        print(critical_frame(list(points)).to_string(index=False))
    if args.out:
        write_critical_report(list(points), args.out)
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    if not args.inputs:
        raise UsageError("render: no input CSVs given")
    if not args.out:
        raise UsageError("render: --out is required")
    defaults = RenderOptions()
    opts = RenderOptions(
        width_px=_pick(args.width_px, defaults.width_px),
        show_disk=not args.no_disk,
        level_color=_pick(args.level_color, defaults.level_color),
        trajectory_color=_pick(args.trajectory_color, defaults.trajectory_color),
        critical_color=_pick(args.critical_color, defaults.critical_color),
    )
    render_files(args.inputs, args.out, opts)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    suite = _pick(args.suite, "all")
    if suite != "all" and suite not in SUITES:
        raise UsageError(f"verify: unknown suite {suite!r}, expected one of all, {', '.join(SUITES)}")
    checks = run_suite(suite)
    for check in checks:
        print(format_check(check))
    failed = sum(1 for check in checks if not check.passed)
    print(f"{len(checks) - failed} passed, {failed} failed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


COMMANDS = {
    "eval": cmd_eval,
    "trajectory": cmd_trajectory,
    "level": cmd_level,
    "critical": cmd_critical,
    "render": cmd_render,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("no command given")
        setup_logging(getattr(logging, args.log_level))
        _merge_scenario(args)
        return COMMANDS[args.command](args)
    except (UsageError, HypDiskParseError, ValueError, FileNotFoundError) as e:
        print(f"hypdisk: {e}", file=sys.stderr)
        return EXIT_USAGE
    except HypDiskNumericError as e:
        print(f"hypdisk: {e}", file=sys.stderr)
        return EXIT_NUMERIC
