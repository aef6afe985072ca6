"""
Batch runs over many trajectory starts or levels. A failing item is recorded
and the run continues; results are exported one CSV per curve.
"""

import os
from typing import Dict, List, Optional, Sequence

import pandas as pd

from hypdiskpy.config import CSV_FLOAT_FORMAT, LEVEL_GRID_DENSITY
from hypdiskpy.disk import HypDisk
from hypdiskpy.exception import HypDiskNumericError
from hypdiskpy.flow import TraceOptions, Trajectory, write_trajectory_csv
from hypdiskpy.levels import LevelCurve, LevelOptions, write_level_csv
from hypdiskpy.log import log_error, log_info, log_warning
from hypdiskpy.model import HypDiskModel
from hypdiskpy.util import format_complex

FAILURE_COLUMNS = ["index", "item", "reason"]


class BatchFailure(HypDiskModel):
    index: int
    item: str
    reason: str


class _BatchRunner(object):
    def __init__(self, disk: HypDisk):
        self.disk = disk
        self.failures: List[BatchFailure] = []

    def _record_failure(self, index: int, item: str, error: Exception) -> None:
        log_warning("item %d (%s) failed: %s", index, item, error)
        self.failures.append(BatchFailure(index=index, item=item, reason=str(error)))

    def _check_all_failed(self, n_items: int, kind: str) -> None:
        if n_items and len(self.failures) == n_items:
            log_error("all %d %s failed", n_items, kind)

    def save_failures(self, filename: str) -> bool:
        """
        Write the failed items to a CSV; nothing is written when there are none.
        """
        if not self.failures:
            return False
        df = pd.DataFrame([f.model_dump() for f in self.failures], columns=FAILURE_COLUMNS)
        df.to_csv(filename, index=False, lineterminator="\n")
        log_info("saved %d failures to %s", len(self.failures), filename)
        return True

    def _print_failures(self) -> None:
        for f in self.failures:
            print(f"FAILED {f.item}: {f.reason}")


class TrajectoryRunner(_BatchRunner):
    def __init__(self, disk: HypDisk, opts: Optional[TraceOptions] = None):
        super().__init__(disk)
        self.opts = opts or TraceOptions()
        self.trajectories: List[Trajectory] = []

    def run(self, starts: Sequence[complex]) -> List[Trajectory]:
        """
        Trace every start, in order of increasing (Re, Im).
        """
        self.trajectories, self.failures = [], []
        for i, z0 in enumerate(sorted([complex(z) for z in starts], key=lambda z: (z.real, z.imag))):
            try:
                self.trajectories.append(self.disk.flow.trace(z0, self.opts))
            except HypDiskNumericError as e:
                self._record_failure(i, format_complex(z0), e)
        self._check_all_failed(len(starts), "starts")
        return self.trajectories

    def export_csv(self, out_dir: str, prefix: str = "trajectory") -> List[str]:
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        for i, traj in enumerate(self.trajectories):
            path = os.path.join(out_dir, f"{prefix}_{i:03d}.csv")
            write_trajectory_csv(traj, path)
            paths.append(path)
        return paths

    def summary(self) -> pd.DataFrame:
        rows = []
        for traj in self.trajectories:
            check = self.disk.flow.growth_bound_check(traj)
            rows.append(
                {
                    "start": format_complex(traj.z0),
                    "t0": traj.t0,
                    "omega_minus": traj.omega_minus_est,
                    "omega_plus": traj.omega_plus_est,
                    "end_minus": traj.end_reason_minus.value if traj.end_reason_minus else "-",
                    "end_plus": traj.end_reason_plus.value if traj.end_reason_plus else "-",
                    "growth_lhs": check.lhs,
                    "growth_rhs": check.rhs,
                    "growth_holds": check.holds,
                }
            )
        return pd.DataFrame(rows)

    def print_summary(self) -> None:
        print(f"{len(self.trajectories)} trajectories, {len(self.failures)} failed starts")
        if self.trajectories:
            print(self.summary().to_string(index=False, float_format=lambda x: CSV_FLOAT_FORMAT % x))
        self._print_failures()


class LevelRunner(_BatchRunner):
    def __init__(
        self, disk: HypDisk, grid_density: int = LEVEL_GRID_DENSITY, opts: Optional[LevelOptions] = None
    ):
        super().__init__(disk)
        self.grid_density = grid_density
        self.opts = opts or LevelOptions()
        self.curves: Dict[float, List[LevelCurve]] = {}

    def run(self, levels: Sequence[float]) -> Dict[float, List[LevelCurve]]:
        """
        All components of every level, levels in increasing order.
        """
        self.curves, self.failures = {}, []
        for i, t in enumerate(sorted([float(t) for t in levels])):
            try:
                self.curves[t] = list(self.disk.levels.components(t, self.grid_density, self.opts))
            except (HypDiskNumericError, ValueError) as e:
                self._record_failure(i, CSV_FLOAT_FORMAT % t, e)
        self._check_all_failed(len(levels), "levels")
        return self.curves

    def export_csv(self, out_dir: str, prefix: str = "level") -> List[str]:
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        for i, (t, curves) in enumerate(self.curves.items()):
            for k, curve in enumerate(curves):
                path = os.path.join(out_dir, f"{prefix}_{i:03d}_{k:02d}.csv")
                write_level_csv(curve, path)
                paths.append(path)
        return paths

    def summary(self) -> pd.DataFrame:
        rows = []
        for t, curves in self.curves.items():
            for k, curve in enumerate(curves):
                rows.append(
                    {
                        "t": t,
                        "component": k,
                        "vertices": len(curve.vertices),
                        "closed": curve.closed,
                        "end_start": curve.end_reasons[0].value,
                        "end_end": curve.end_reasons[1].value,
                    }
                )
        return pd.DataFrame(rows)

    def print_summary(self) -> None:
        for t, curves in self.curves.items():
            print(f"level {CSV_FLOAT_FORMAT % t}: {len(curves)} components")
        if any(self.curves.values()):
            print(self.summary().to_string(index=False))
        self._print_failures()
