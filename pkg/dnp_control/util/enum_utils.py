from enum import Enum
from typing import Generic, TypeVar

_T = TypeVar("_T")

_EnumExtendT = TypeVar("_EnumExtendT", bound="EnumExtend")


class EnumExtend(Generic[_T]):
    """Mixin tying each Enum member to a numeric counterpart.

    Members keep readable string values for configs and reports, while the
    numerics use `get_mapped_value` (a subsystem index, a transition list, a
    logging back end).
    ::

        class Subsystem(EnumExtend[int], str, Enum):
            ELECTRON = "Electron spin"
            NUCLEUS = "Nuclear spin"

            @classmethod
            def _get_value_map(cls) -> dict["Subsystem", int]:
                return {Subsystem.ELECTRON: 0, Subsystem.NUCLEUS: 1}
    """

    @classmethod
    def _get_value_map(cls: type[_EnumExtendT]) -> dict[_EnumExtendT, _T]:
        """Member to mapped value table, built once per class."""
        raise NotImplementedError(f"{cls.__name__} has no value map")

    @classmethod
    def get_mapped_value(cls: type[_EnumExtendT], value: _EnumExtendT) -> _T:
        if "_value_map" not in cls.__dict__:
            value_map = cls._get_value_map()
            missing = [member for member in cls if member not in value_map]  # type: ignore[attr-defined]
            if missing:
                raise NotImplementedError(f"{cls.__name__} does not map {missing}")
            cls._value_map = value_map

        return cls._value_map[value]
