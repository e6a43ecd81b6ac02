from typing import NamedTuple

import numpy as np

from dnp_control.channels.kraus import KrausSet
from dnp_control.channels.representations import (
    ChoiMatrix,
    SuperMatrix,
    kraus_to_choi,
    super_to_choi,
)
from dnp_control.util import CheckStatus, ResultWithStatus
from dnp_control.util.types import CPTP_TOL


class CptpReport(NamedTuple):
    trace_deviation: float
    min_choi_eigenvalue: float
    tolerance: float

    def __str__(self) -> str:
        return (
            f"trace deviation {self.trace_deviation:.3g}, "
            + f"min Choi eigenvalue {self.min_choi_eigenvalue:.3g}, "
            + f"tolerance {self.tolerance:.3g}"
        )


def validate_cptp(
    channel: KrausSet | ChoiMatrix | SuperMatrix,
    tol: float = CPTP_TOL,
) -> ResultWithStatus[CptpReport]:
    """Check complete positivity and trace preservation without raising.

    For Kraus sets the trace deviation is ‖Σ M†M − 𝟙‖, otherwise the
    deviation of the Choi output trace from 𝟙.
    """
    if isinstance(channel, KrausSet):
        choi = kraus_to_choi(channel)
        deviation = channel.completeness_deviation()
    else:
        choi = super_to_choi(channel) if isinstance(channel, SuperMatrix) else channel
        deviation = float(np.linalg.norm(choi.output_trace() - np.eye(choi.dim), 2))

    report = CptpReport(
        trace_deviation=deviation,
        min_choi_eigenvalue=float(choi.eigenvalues()[0]),
        tolerance=tol,
    )
    passed = deviation <= tol and report.min_choi_eigenvalue >= -tol

    return ResultWithStatus(
        CheckStatus.PASSED if passed else CheckStatus.FAILED,
        report,
    )
