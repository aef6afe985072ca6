from typing import List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import Field

from hypdiskpy.config import SVG_WIDTH_PX
from hypdiskpy.crit import CRITICAL_COLUMNS, Classification, CriticalKind, read_critical_report
from hypdiskpy.flow import TRAJECTORY_COLUMNS, Trajectory, read_trajectory_csv
from hypdiskpy.levels import LevelCurve, read_level_csv
from hypdiskpy.log import log_debug
from hypdiskpy.model import HypDiskModel

VIEW_BOX = "-1.05 -1.05 2.1 2.1"

Marker = Tuple[CriticalKind, complex, Classification]


class RenderOptions(HypDiskModel):
    width_px: int = Field(default=SVG_WIDTH_PX, gt=0)
    show_disk: bool = True
    disk_color: str = "#000000"
    level_color: str = "#1f77b4"
    trajectory_color: str = "#d62728"
    critical_color: str = "#2ca02c"


def _fmt(x: float) -> str:
    text = f"{x:.6f}"
    # no negative zero in the output
    return "0.000000" if text == "-0.000000" else text


def _xy(z: complex) -> str:
    return f"{_fmt(z.real)} {_fmt(z.imag)}"


class SvgCanvas(object):
    """
    Accumulates SVG 1.1 markup for the unit disk; model coordinates are used
    directly, the y axis is flipped by the enclosing group.
    """

    def __init__(self, opts: RenderOptions):
        self.opts = opts
        self.svg = ""

    def header(self) -> None:
        w = self.opts.width_px
        self.svg += f"""<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg version="1.1" width="{w}" height="{w}" viewBox="{VIEW_BOX}" xmlns="http://www.w3.org/2000/svg">
<g transform="scale(1,-1)" fill="none" stroke-width="0.004">
"""

    def unit_circle(self) -> None:
        self.svg += f'<circle class="disk" cx="0" cy="0" r="1" stroke="{self.opts.disk_color}"/>\n'

    def level(self, curve: LevelCurve) -> None:
        if not curve.vertices:
            return
        head, *rest = curve.vertices
        d = "M " + _xy(head) + "".join(" L " + _xy(z) for z in rest)
        if curve.closed:
            d += " Z"
        self.svg += f'<path class="level" d="{d}" stroke="{self.opts.level_color}"/>\n'

    def trajectory(self, traj: Trajectory) -> None:
        points = " ".join(f"{_fmt(s.z.real)},{_fmt(s.z.imag)}" for s in traj.samples)
        self.svg += f'<polyline class="trajectory" points="{points}" stroke="{self.opts.trajectory_color}"/>\n'

    def critical(self, marker: Marker) -> None:
        kind, z, classification = marker
        self.svg += (
            f'<circle class="critical {kind.value} {classification.value}" cx="{_fmt(z.real)}" cy="{_fmt(z.imag)}" '
            f'r="0.015" fill="{self.opts.critical_color}" stroke="none"/>\n'
        )

    def get_svg(self) -> str:
        return f"{self.svg}</g>\n</svg>\n"


def render_svg(
    levels: Sequence[LevelCurve] = (),
    trajectories: Sequence[Trajectory] = (),
    critical: Sequence[Marker] = (),
    opts: Optional[RenderOptions] = None,
) -> str:
    """
    SVG text of the disk with the given curves and markers. Identical input gives
    byte-identical output.
    """
    canvas = SvgCanvas(opts or RenderOptions())
    canvas.header()
    if canvas.opts.show_disk:
        canvas.unit_circle()
    for curve in levels:
        canvas.level(curve)
    for traj in trajectories:
        canvas.trajectory(traj)
    for marker in critical:
        canvas.critical(marker)
    return canvas.get_svg()


def _csv_kind(path: str) -> str:
    columns = list(pd.read_csv(path, nrows=0).columns)
    if columns == TRAJECTORY_COLUMNS:
        return "trajectory"
    if columns == CRITICAL_COLUMNS:
        return "critical"
    if columns == ["t", "re_z", "im_z"]:
        return "level"
    raise ValueError(f"{path}: unrecognised CSV header {','.join(columns)}")


def render_files(inputs: Sequence[str], out: str, opts: Optional[RenderOptions] = None) -> str:
    """
    Render trajectory, level and critical-point CSVs (recognised by their header)
    into one SVG file, in input order within each layer.

    :return: the SVG text written to ``out``
    """
    if not inputs:
        raise ValueError("render needs at least one input CSV")
    levels: List[LevelCurve] = []
    trajectories: List[Trajectory] = []
    markers: List[Marker] = []
    for path in inputs:
        kind = _csv_kind(path)
        log_debug("render: %s as %s", path, kind)
        if kind == "trajectory":
            trajectories.append(read_trajectory_csv(path))
        elif kind == "level":
            levels.append(read_level_csv(path))
        else:
            markers.extend(read_critical_report(path))
    text = render_svg(levels, trajectories, markers, opts)
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return text
