from dataclasses import dataclass
from enum import Enum
from io import StringIO

import numpy as np
import pytest

from dnp_control.util import (
    CheckStatus,
    ConfigError,
    EnumExtend,
    Logger,
    LogLevel,
    LogSolution,
    NumericalError,
    ReprInfo,
    ResultWithStatus,
    SerializableData,
)


@pytest.fixture
def log_stream():
    stream = StringIO()
    yield stream
    Logger.init_by_default_solution()


@pytest.mark.parametrize("solution", [LogSolution.PRINT, LogSolution.LOGGING])
def test_logger_honours_lowest_level(log_stream, solution):
    Logger.init(solution, LogLevel.WARNING, stream_to=log_stream, force=True)

    Logger.info("hidden")
    Logger.warning("fixed point", 3)

    text = log_stream.getvalue()
    assert "hidden" not in text
    assert "WARNING" in text
    assert "fixed point, 3" in text
    assert Logger.get_current_solution() == solution


def test_logger_init_without_force_keeps_first_setup(log_stream):
    Logger.init(LogSolution.PRINT, LogLevel.DEBUG, stream_to=log_stream, force=True)
    Logger.init(LogSolution.PRINT, LogLevel.CRITICAL, stream_to=StringIO())

    Logger.debug("still here")

    assert "still here" in log_stream.getvalue()


class _Spin(EnumExtend[int], str, Enum):
    UP = "up"
    DOWN = "down"

    @classmethod
    def _get_value_map(cls):
        return {_Spin.UP: 0}


def test_enum_value_map_must_cover_every_member():
    with pytest.raises(NotImplementedError, match="DOWN"):
        _Spin.get_mapped_value(_Spin.UP)


class _Result(ReprInfo):
    def __repr_data__(self) -> dict:
        return {"rate": 1.23456789, "map": np.eye(4)}


def test_repr_shortens_floats_and_arrays():
    assert repr(_Result()) == "<_Result: rate=1.23457, map=ndarray(4, 4)>"


def test_failed_check_raises_numerical_error():
    check = ResultWithStatus(CheckStatus.FAILED, "trace deviation 1e-3")

    assert not check.passed
    with pytest.raises(NumericalError, match="trace deviation"):
        check.get_verified_result("channel is not CPTP")


@dataclass(frozen=True)
class _Point(SerializableData):
    x: float
    y: float = 0.0


def test_missing_field_is_named():
    with pytest.raises(ConfigError) as error:
        _Point.load_from_data({"y": 1.0})

    assert error.value.errors == ["x: missing required field"]


@dataclass(frozen=True)
class _Segment(SerializableData):
    start: _Point
    duration: float


def test_nested_missing_field_carries_its_path():
    with pytest.raises(ConfigError) as error:
        _Segment.load_from_data({"start": {}, "duration": 1.0})

    assert error.value.errors == ["start.x: missing required field"]


def test_every_unknown_key_is_reported():
    with pytest.raises(ConfigError) as error:
        _Point.load_from_data({"x": 1.0, "z": 1.0, "w": 2.0})

    lines = error.value.errors
    assert any("'z'" in line for line in lines)
    assert any("'w'" in line for line in lines)


def test_malformed_json_is_a_config_error():
    with pytest.raises(ConfigError, match="malformed JSON"):
        _Point.load_from_json("{x: 1")


def test_save_and_load_file(tmp_path):
    path = tmp_path / "point.json"
    _Point(1.5, -2.0).save_to_file(path)

    assert _Point.load_from_file(path) == _Point(1.5, -2.0)
