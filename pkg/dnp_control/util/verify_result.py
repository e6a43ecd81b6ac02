from enum import Enum
from typing import Generic, TypeVar

from typing_extensions import NamedTuple

from dnp_control.util.exceptions import NumericalError


class CheckStatus(str, Enum):
    PASSED = "Passed"
    FAILED = "Failed"


_ResultT = TypeVar("_ResultT")


class ResultWithStatus(NamedTuple, Generic[_ResultT]):
    status: CheckStatus
    result: _ResultT

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASSED

    def get_verified_result(
        self,
        _error_info: str = "Numerical check failed.",
    ) -> _ResultT:
        """
        Verifies the status of the check and returns the result if it passed.

        Args:
            _error_info: A custom error message to raise if the check failed.

        Returns:
            The carried result if the status is PASSED.

        Raises:
            NumericalError: If the status of the check is FAILED.
        """
        if self.status == CheckStatus.FAILED:
            raise NumericalError(f"{_error_info} ({self.result})")

        return self.result
