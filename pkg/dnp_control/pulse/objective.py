from typing import NamedTuple, Optional

import numpy as np

from dnp_control.channels import SuperMatrix, gate_fidelity, map_fidelity, reduce_to_nuclear
from dnp_control.dnp import RelaxationParams, ideal_dnp_map
from dnp_control.pulse.pulse_map import (
    PulseMode,
    pulse_map,
    saturation_cycle,
    saturation_cycles,
    target_unitary,
)
from dnp_control.pulse.sequence import PulseSequence
from dnp_control.quantum import (
    DnpMechanism,
    Frame,
    SpinSystemParams,
    Subsystem,
    drift_hamiltonian,
    eigenframe,
    partial_trace,
    thermal_state,
)
from dnp_control.util import Logger

# Allowed amount by which relaxation may lower the objective before it is reported.
MODE_ORDER_SLACK = 1e-9


def objective(
    sequence: PulseSequence,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    mode: PulseMode = PulseMode.OPEN,
    dt_max: Optional[float] = None,
    frame: Optional[Frame] = None,
) -> float:
    """1 − gate fidelity of the sequence against `target_unitary`."""
    kraus = pulse_map(sequence, system, relaxation, mode, dt_max, frame=frame)
    return float(np.clip(1 - gate_fidelity(target_unitary(), kraus), 0.0, 1.0))


class ModeComparison(NamedTuple):
    open_objective: float
    closed_objective: float

    @property
    def difference(self) -> float:
        return self.open_objective - self.closed_objective

    @property
    def ordered(self) -> bool:
        """Relaxation did not improve the objective."""
        return self.difference >= -MODE_ORDER_SLACK


def compare_modes(
    sequence: PulseSequence,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    dt_max: Optional[float] = None,
    frame: Optional[Frame] = None,
) -> ModeComparison:
    comparison = ModeComparison(
        objective(sequence, system, relaxation, PulseMode.OPEN, dt_max, frame),
        objective(sequence, system, relaxation, PulseMode.CLOSED, dt_max, frame),
    )

    Logger.info(
        f"objective open {comparison.open_objective:.6g}, "
        + f"closed {comparison.closed_objective:.6g}"
    )
    if not comparison.ordered:
        Logger.warning(
            f"relaxation lowered the objective by {-comparison.difference:.3g} "
            + f"for {sequence.describe()}"
        )

    return comparison


def _reduced(train: SuperMatrix, frame: Frame, system: SpinSystemParams) -> SuperMatrix:
    rho_e = partial_trace(thermal_state(system), Subsystem.ELECTRON)
    return reduce_to_nuclear(SuperMatrix(frame.dress_super(train.matrix)), rho_e)


def reduced_map_fidelity(
    sequence: PulseSequence,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    n_cycles: Optional[int] = None,
    delay: float = 0.0,
    dt_max: Optional[float] = None,
    frame: Optional[Frame] = None,
) -> float:
    """Overlap of the train's reduced nuclear map with the ideal Overhauser one.

    Both trains repeat with the same period for `n_cycles`, by default long
    enough to saturate, and are reduced with a thermal electron in the
    dressed basis before `map_fidelity` compares them.
    """
    frame = frame or eigenframe(drift_hamiltonian(system))
    period = sequence.total_duration + delay
    n_cycles = saturation_cycles(period, relaxation) if n_cycles is None else n_cycles

    if n_cycles < 1:
        raise ValueError(f"n_cycles must be >= 1, got {n_cycles}")

    cycle = saturation_cycle(
        sequence, system, relaxation, delay, PulseMode.OPEN, dt_max, frame=frame
    )
    ideal = ideal_dnp_map(
        DnpMechanism.OE, system, relaxation, n_cycles=n_cycles, dt=period, frame=frame
    )

    fidelity = map_fidelity(
        _reduced(cycle.power(n_cycles), frame, system),
        _reduced(ideal, frame, system),
    )
    Logger.debug(f"reduced map fidelity {fidelity:.6g} over {n_cycles} cycles")

    return fidelity
