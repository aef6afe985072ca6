import logging
import os

import pandas as pd

from hypdiskpy.disk import HypDisk
from hypdiskpy.flow import Direction, TraceOptions
from hypdiskpy.levels import LevelOptions
from hypdiskpy.runner import FAILURE_COLUMNS, LevelRunner, TrajectoryRunner


def test_trajectory_runner_orders_starts_and_records_failures(tmp_path):
    disk = HypDisk("example4(c=0.6)")
    runner = TrajectoryRunner(disk, TraceOptions(direction=Direction.FORWARD, t_max=0.9))
    trajs = runner.run([0.3j, 0j, 0.2])
    # sorted by (Re, Im): 0, 0.3i, 0.2; the zero of phi' fails
    assert [t.z0 for t in trajs] == [0.3j, 0.2 + 0j]
    assert len(runner.failures) == 1
    assert runner.failures[0].index == 0
    assert "phi' vanishes" in runner.failures[0].reason

    paths = runner.export_csv(str(tmp_path))
    assert [os.path.basename(p) for p in paths] == ["trajectory_000.csv", "trajectory_001.csv"]
    failures = str(tmp_path / "failures.csv")
    assert runner.save_failures(failures)
    assert list(pd.read_csv(failures).columns) == FAILURE_COLUMNS

    summary = runner.summary()
    assert len(summary) == 2
    assert summary["growth_holds"].all()


def test_runner_writes_no_failure_file_without_failures(tmp_path):
    runner = TrajectoryRunner(HypDisk("example4(c=0.6)"), TraceOptions(direction=Direction.FORWARD, t_max=0.5))
    runner.run([0.2])
    assert not runner.save_failures(str(tmp_path / "failures.csv"))
    assert not (tmp_path / "failures.csv").exists()


def test_level_runner(tmp_path):
    runner = LevelRunner(HypDisk("example4(c=0.6)"), 16, LevelOptions())
    curves = runner.run([0.8, 0.6])
    assert list(curves) == [0.6, 0.8]
    assert all(len(c) == 1 for c in curves.values())
    paths = runner.export_csv(str(tmp_path))
    assert sorted(os.path.basename(p) for p in paths) == ["level_000_00.csv", "level_001_00.csv"]
    assert (tmp_path / "level_000_00.csv.meta").exists()
    assert list(runner.summary()["closed"]) == [True, True]


def test_runner_logs_an_error_when_every_item_fails(caplog):
    runner = TrajectoryRunner(HypDisk("example4(c=0.6)"), TraceOptions(direction=Direction.FORWARD, t_max=0.5))
    with caplog.at_level(logging.WARNING, logger="hypdiskpy"):
        runner.run([0j])
    assert [r.levelno for r in caplog.records if "all 1 starts failed" in r.getMessage()] == [logging.ERROR]
