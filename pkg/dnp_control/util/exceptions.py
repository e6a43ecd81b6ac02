from typing import Sequence


class DnpError(Exception):
    """Base class of every error raised by dnp_control."""


class ConfigError(DnpError, ValueError):
    """A run configuration could not be loaded or failed validation.

    All problems found are kept in `errors`, one line each.
    """

    def __init__(self, errors: Sequence[str]) -> None:
        self.errors = list(errors)
        super().__init__("; ".join(self.errors) or "invalid configuration")


class DimensionError(DnpError, ValueError):
    """Operands of an operation do not have matching shapes."""


class MissingParameterError(DnpError, ValueError):
    """An optional physical parameter is required but absent."""


class NumericalError(DnpError, RuntimeError):
    """A numeric routine produced an unusable result."""


class DegenerateFixedPointError(NumericalError):
    """The eigenvalue-one eigenspace of a map has more than one dimension."""

    def __init__(self, candidates: Sequence[complex]) -> None:
        self.candidates = list(candidates)
        listed = ", ".join(f"{value:.12g}" for value in self.candidates)
        super().__init__(
            f"fixed point is degenerate, {len(self.candidates)} eigenvalues "
            + f"within tolerance of 1: [{listed}]"
        )
