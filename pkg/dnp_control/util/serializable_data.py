from json import dump, loads
from pathlib import Path
from typing import Any, Iterator, TypeVar

import numpy as np
from adaptix import ExtraForbid, Retort, dumper, loader, name_mapping
from adaptix.load_error import (
    ExtraFieldsLoadError,
    LoadError,
    NoRequiredFieldsLoadError,
)
from adaptix.struct_trail import get_trail

from dnp_control.util.exceptions import ConfigError

try:
    ExceptionGroup_ = ExceptionGroup  # type: ignore[name-defined]
except NameError:  # python 3.10
    from exceptiongroup import ExceptionGroup as ExceptionGroup_

_SerializedDataT = TypeVar("_SerializedDataT", bound="SerializableData")


class SerializableData:
    """Base class for dataclasses stored as JSON.

    Loading is strict: unknown keys are rejected and every problem found in
    the document is reported at once through `ConfigError`.

    Usage:
    ::

        @dataclass(frozen=True)
        class Segment(SerializableData):
            state: SegmentState
            duration: float

        segment = Segment.load_from_file(Path("segment.json"))
        segment.save_to_file(Path("copy.json"))

    Subclasses extend `get_serialization_settings` to add recipes, e.g.
    `enum_by_name` for their enumerations.
    """

    @classmethod
    def get_serialization_settings(cls) -> Retort:
        """Provides serialization settings for the data class.

        Returns:
            Retort: Strict retort with numpy array support.
        """
        return Retort(
            recipe=[
                name_mapping(extra_in=ExtraForbid()),
                loader(np.ndarray, np.array),
                dumper(np.ndarray, lambda x: x.tolist()),
            ]
        )

    @classmethod
    def load_from_data(
        cls: type[_SerializedDataT],
        data: Any,
    ) -> _SerializedDataT:
        """Loads an instance from already parsed JSON data.

        Raises:
            ConfigError: The data does not describe a valid instance.
        """
        try:
            return cls.get_serialization_settings().load(data, cls)
        except (LoadError, ExceptionGroup_) as error:  # type: ignore[misc]
            raise ConfigError(list(flatten_load_error(error))) from error

    @classmethod
    def load_from_json(
        cls: type[_SerializedDataT],
        _json: str,
    ) -> _SerializedDataT:
        """Loads a serializable data object from a JSON string.

        Args:
            _json (str): JSON string of data

        Returns:
            _SerializedDataT: An instance of the class with data
        """
        try:
            json_obj = loads(_json)
        except ValueError as error:
            raise ConfigError([f"malformed JSON: {error}"]) from error

        return cls.load_from_data(json_obj)

    @classmethod
    def load_from_file(
        cls: type[_SerializedDataT],
        _path: Path,
    ) -> _SerializedDataT:
        """Loads a serialized object from a file.

        Args:
            _path: Path to the file.

        Returns:
            _SerializedDataT: An instance of the class with data
                loaded from the file.

        Raises:
            FileNotFoundError: If the file does not exist.
            ConfigError: If the content is not a valid instance.
        """
        if not _path.is_file():
            raise FileNotFoundError(_path)

        return cls.load_from_json(_path.read_text(encoding="utf-8"))

    def to_data(self) -> Any:
        """Dump the instance into JSON compatible python objects."""
        return self.__class__.get_serialization_settings().dump(self)

    def save_to_file(self, _path: Path) -> None:
        """Saves a serialized object to a file.

        Args:
            _path: Path where the data will be saved.
        """
        with _path.open("w", encoding="utf-8") as _file:
            dump(self.to_data(), _file, indent=4, sort_keys=True)
            _file.write("\n")


def _format_path(path: list) -> str:
    return ".".join(str(getattr(part, "name", part)) for part in path) or "<root>"


def flatten_load_error(error: BaseException, prefix: list | None = None) -> Iterator[str]:
    """Turn a (possibly aggregated) adaptix load error into one line per leaf.

    Args:
        error (BaseException): Error raised by `Retort.load`.
        prefix (list | None): Trail of the enclosing error group.

    Yields:
        str: ``"dotted.path: problem"`` lines.
    """
    path = list(prefix or []) + list(get_trail(error))
    nested = getattr(error, "exceptions", None)

    if nested:
        for sub_error in nested:
            yield from flatten_load_error(sub_error, path)
        return

    if isinstance(error, ExtraFieldsLoadError):
        for field in error.fields:
            yield f"{_format_path(path + [field])}: unknown key {field!r}"
        return

    if isinstance(error, NoRequiredFieldsLoadError):
        for field in sorted(error.fields):
            yield f"{_format_path(path + [field])}: missing required field"
        return

    yield f"{_format_path(path)}: {type(error).__name__} {error}"
