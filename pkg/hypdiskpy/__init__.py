# public classes and types
from .disk import HypDisk
from .expr import builtin, parse, unparse
from .flow import Direction, TraceOptions, TrajectoryEndReason
from .hypops import HypPoint, evaluate
from .levels import LevelEndReason, LevelOptions
from .crit import Classification, CriticalKind

__all__ = [
    "HypDisk",
    "builtin",
    "parse",
    "unparse",
    "evaluate",
    "HypPoint",
    "Direction",
    "TraceOptions",
    "TrajectoryEndReason",
    "LevelEndReason",
    "LevelOptions",
    "Classification",
    "CriticalKind",
]
