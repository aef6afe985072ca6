"""
Scenario files: plain ``key = value`` text with one ``[section]`` per command.

    [trajectory]
    function = example1(a=0.5)
    starts = 0, 0.1+0.2i
    t_max = 0.49
    out_dir = out

List values are separated by commas or whitespace.
"""

import configparser
import os
import re
from typing import Dict, List, Optional

from pydantic import Field, field_validator

from hypdiskpy.expr import parse
from hypdiskpy.flow import Direction
from hypdiskpy.log import log_debug
from hypdiskpy.model import HypDiskModel
from hypdiskpy.util import parse_complex

COMMANDS = ("eval", "trajectory", "level", "critical", "render", "verify")

_LIST_SPLIT = re.compile(r"[,\s]+")


class Scenario(HypDiskModel):
    command: str
    function: Optional[str] = None
    z: Optional[complex] = None
    starts: List[complex] = []
    levels: List[float] = []
    inputs: List[str] = []
    suite: Optional[str] = None
    direction: Optional[Direction] = None
    grid_density: Optional[int] = Field(default=None, gt=0)
    level_tol: Optional[float] = Field(default=None, gt=0)
    boundary_margin: Optional[float] = Field(default=None, gt=0, lt=1)
    max_steps: Optional[int] = Field(default=None, gt=0)
    t_min: Optional[float] = Field(default=None, gt=0, lt=1)
    t_max: Optional[float] = Field(default=None, gt=0, lt=1)
    max_step: Optional[float] = Field(default=None, gt=0)
    rtol: Optional[float] = Field(default=None, gt=0)
    step: Optional[float] = Field(default=None, gt=0)
    max_turn: Optional[float] = Field(default=None, gt=0)
    newton_tol: Optional[float] = Field(default=None, gt=0)
    class_tol: Optional[float] = Field(default=None, gt=0)
    width_px: Optional[int] = Field(default=None, gt=0)
    out: Optional[str] = None
    out_dir: Optional[str] = None

    @field_validator("command")
    @classmethod
    def _known_command(cls, value: str) -> str:
        if value not in COMMANDS:
            raise ValueError(f"unknown command section [{value}]")
        return value

    @field_validator("function")
    @classmethod
    def _parses(cls, value: Optional[str]) -> Optional[str]:
        # HypDiskParseError propagates unchanged
        if value is not None:
            parse(value)
        return value

    @field_validator("levels")
    @classmethod
    def _open_interval(cls, value: List[float]) -> List[float]:
        for t in value:
            if not 0.0 < t < 1.0:
                raise ValueError(f"level {t} is not in (0, 1)")
        return value


class ScenarioLoader(object):
    """
    Reads the section of a scenario file that belongs to one command.
    """

    def _split(self, text: str) -> List[str]:
        return [item for item in _LIST_SPLIT.split(text.strip()) if item]

    def _convert(self, values: Dict[str, str]) -> Dict[str, object]:
        data: Dict[str, object] = {}
        for key, text in values.items():
            if key == "z":
                data[key] = parse_complex(text)
            elif key == "starts":
                data[key] = [parse_complex(item) for item in self._split(text)]
            elif key == "levels":
                data[key] = [float(item) for item in self._split(text)]
            elif key == "inputs":
                data[key] = self._split(text)
            else:
                data[key] = text.strip()
        return data

    def sections(self, filename: str) -> List[str]:
        return self._read(filename).sections()

    def _read(self, filename: str) -> configparser.ConfigParser:
        if not os.path.exists(filename):
            raise ValueError(f"scenario file {filename} does not exist")
        parser = configparser.ConfigParser(interpolation=None)
        with open(filename, "r", encoding="utf-8") as f:
            parser.read_file(f)
        return parser

    def load(self, filename: str, command: str) -> Scenario:
        """
        :param filename: scenario file
        :param command: section to read; a missing section gives an empty scenario
        """
        parser = self._read(filename)
        if not parser.has_section(command):
            log_debug("scenario %s has no [%s] section", filename, command)
            return Scenario(command=command)
        values = dict(parser.items(command))
        log_debug("scenario %s [%s]: %s", filename, command, ", ".join(sorted(values)))
        return Scenario(command=command, **self._convert(values))
