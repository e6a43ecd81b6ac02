from abc import abstractmethod

import numpy as np


class ReprInfo:
    """Mixin giving records and results a `<Name: key=value, ...>` repr.

    Arrays print as their shape and floats with six significant digits, so
    a repr stays one readable line in log records.
    """

    @abstractmethod
    def __repr_data__(self) -> dict:
        """Fields to show, in order."""
        ...

    def __repr__(self) -> str:
        fields = ", ".join(
            f"{name}={_short(value)}" for name, value in self.__repr_data__().items()
        )
        return f"<{type(self).__name__}: {fields or 'empty'}>"


def _short(value: object) -> str:
    if isinstance(value, np.ndarray):
        return f"ndarray{value.shape}"

    if isinstance(value, (float, np.floating)):
        return f"{value:.6g}"

    return str(value)
