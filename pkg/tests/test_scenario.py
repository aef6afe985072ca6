import pytest
from pydantic import ValidationError

from hypdiskpy.exception import HypDiskParseError
from hypdiskpy.flow import Direction
from hypdiskpy.scenario import Scenario, ScenarioLoader

SCENARIO = """
[trajectory]
function = example1(a=0.5)
starts = 0, 0.1+0.2i -0.3i
direction = forward
t_max = 0.49
max_steps = 500
out_dir = out

[level]
function = example4(c=0.6)
levels = 0.2, 0.8
grid_density = 16

[render]
inputs = a.csv b.csv
out = plot.svg
"""


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.ini"
    path.write_text(SCENARIO, encoding="utf-8")
    return str(path)


def test_sections(scenario_file):
    assert ScenarioLoader().sections(scenario_file) == ["trajectory", "level", "render"]


def test_trajectory_section(scenario_file):
    scenario = ScenarioLoader().load(scenario_file, "trajectory")
    assert scenario.function == "example1(a=0.5)"
    assert scenario.starts == [0j, 0.1 + 0.2j, -0.3j]
    assert scenario.direction == Direction.FORWARD
    assert scenario.t_max == 0.49
    assert scenario.max_steps == 500
    assert scenario.out_dir == "out"


def test_level_and_render_sections(scenario_file):
    loader = ScenarioLoader()
    level = loader.load(scenario_file, "level")
    assert level.levels == [0.2, 0.8]
    assert level.grid_density == 16
    render = loader.load(scenario_file, "render")
    assert render.inputs == ["a.csv", "b.csv"]
    assert render.out == "plot.svg"


def test_missing_section_is_empty(scenario_file):
    scenario = ScenarioLoader().load(scenario_file, "critical")
    assert scenario.command == "critical"
    assert scenario.function is None
    assert scenario.starts == []


def test_missing_file(tmp_path):
    with pytest.raises(ValueError):
        ScenarioLoader().load(str(tmp_path / "nope.ini"), "eval")


def test_validation():
    with pytest.raises(ValidationError):
        Scenario(command="plot")
    with pytest.raises(ValidationError):
        Scenario(command="level", levels=[1.0])
    with pytest.raises(ValidationError):
        Scenario(command="trajectory", t_max=1.2)
    with pytest.raises(HypDiskParseError):
        Scenario(command="eval", function="z^i")
