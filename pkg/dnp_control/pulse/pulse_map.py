from enum import Enum
from math import ceil, isfinite, pi
from typing import AbstractSet, Optional

import numpy as np

from dnp_control.channels import KrausSet, SuperMatrix, kraus_to_super, minimal_kraus
from dnp_control.dnp import (
    RelaxationKind,
    RelaxationParams,
    configured_channels,
    evolution_super,
)
from dnp_control.pulse.sequence import PulseSequence, SegmentState, free_evolution
from dnp_control.quantum import (
    DnpMechanism,
    Frame,
    ReferenceFrame,
    SpinSystemParams,
    control_hamiltonian,
    drift_hamiltonian,
    eigenframe,
    propagator,
    spin_operators,
)
from dnp_control.util import ConfigError
from dnp_control.util.types import ComplexMatrix

# Train length, in units of the slowest relaxation time, taken as saturated.
SATURATION_LIFETIMES = 10


class PulseMode(str, Enum):
    """Open includes T1e and T_x during the pulse, closed is unitary only."""

    OPEN = "open"
    CLOSED = "closed"


def target_unitary() -> ComplexMatrix:
    """exp(-iπ/2 S_x) on the electron, identity on the nucleus."""
    return propagator(pi / 2 * spin_operators()["Sx"], 1.0)


def segment_hamiltonian(
    state: SegmentState,
    system: SpinSystemParams,
    omega_d: float,
) -> ComplexMatrix:
    hamiltonian = drift_hamiltonian(system)

    if state == SegmentState.ON:
        hamiltonian = hamiltonian + control_hamiltonian(DnpMechanism.OE, omega_d)

    return hamiltonian


def _check_sequence(sequence: PulseSequence) -> None:
    if problems := sequence.check():
        raise ConfigError(problems)

    if sequence.carrier != ReferenceFrame.ROTATING:
        raise ConfigError(["pulse.carrier: pulse maps need the electron rotating frame"])


def pulse_unitary(sequence: PulseSequence, system: SpinSystemParams) -> ComplexMatrix:
    """Product of the piecewise constant propagators, last segment leftmost."""
    _check_sequence(sequence)

    unitary = np.eye(4, dtype=np.complex128)
    for segment in sequence.segments:
        hamiltonian = segment_hamiltonian(segment.state, system, sequence.omega_d)
        unitary = propagator(hamiltonian, segment.duration) @ unitary

    return unitary


def pulse_super(
    sequence: PulseSequence,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    dt_max: Optional[float] = None,
    include: Optional[AbstractSet[RelaxationKind]] = None,
    frame: Optional[Frame] = None,
) -> SuperMatrix:
    """Open system map of the sequence.

    Each segment is cut into equal steps no longer than `dt_max`, which
    defaults to min(T1e, T_zq)/100. Off segments evolve under the drift and
    relaxation only.

    Raises:
        ValueError: `dt_max` is not positive.
        MissingParameterError: T_dq is included but not configured.
    """
    _check_sequence(sequence)

    dt_max = relaxation.default_time_step() if dt_max is None else dt_max
    if not dt_max > 0:
        raise ValueError(f"dt_max must be > 0, got {dt_max}")

    include = configured_channels(relaxation) if include is None else include
    frame = frame or eigenframe(drift_hamiltonian(system))

    steps: dict[tuple[SegmentState, float], SuperMatrix] = {}
    supermatrix = SuperMatrix.identity(4)

    for segment in sequence.segments:
        if segment.duration == 0:
            continue

        n_steps = max(1, ceil(segment.duration / dt_max)) if isfinite(dt_max) else 1
        dt = segment.duration / n_steps
        key = (segment.state, dt)

        if key not in steps:
            hamiltonian = segment_hamiltonian(segment.state, system, sequence.omega_d)
            steps[key] = evolution_super(hamiltonian, dt, relaxation, system, frame, include)

        supermatrix = supermatrix.then(steps[key].power(n_steps))

    return supermatrix


def pulse_map(
    sequence: PulseSequence,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    mode: PulseMode = PulseMode.OPEN,
    dt_max: Optional[float] = None,
    include: Optional[AbstractSet[RelaxationKind]] = None,
    frame: Optional[Frame] = None,
) -> KrausSet:
    """Kraus set of the sequence, a single unitary in closed mode.

    The open mode result is the minimal Kraus set of `pulse_super`.
    """
    match mode:
        case PulseMode.CLOSED:
            return KrausSet.unitary(pulse_unitary(sequence, system))
        case PulseMode.OPEN:
            return minimal_kraus(
                pulse_super(sequence, system, relaxation, dt_max, include, frame)
            )
        case _:
            raise ValueError(f"unknown pulse mode: {mode!r}")


def pulse_super_for_mode(
    sequence: PulseSequence,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    mode: PulseMode = PulseMode.OPEN,
    dt_max: Optional[float] = None,
    include: Optional[AbstractSet[RelaxationKind]] = None,
    frame: Optional[Frame] = None,
) -> SuperMatrix:
    if mode == PulseMode.CLOSED:
        return kraus_to_super(KrausSet.unitary(pulse_unitary(sequence, system)))

    return pulse_super(sequence, system, relaxation, dt_max, include, frame)


def saturation_cycle(
    sequence: PulseSequence,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    delay: float = 0.0,
    mode: PulseMode = PulseMode.OPEN,
    dt_max: Optional[float] = None,
    include: Optional[AbstractSet[RelaxationKind]] = None,
    frame: Optional[Frame] = None,
) -> SuperMatrix:
    """One repetition of a saturation train.

    The pulse is followed by `delay` seconds of drift and relaxation; with
    no delay pulses run back to back.
    """
    if not isfinite(delay) or delay < 0:
        raise ValueError(f"delay must be finite and >= 0, got {delay}")

    frame = frame or eigenframe(drift_hamiltonian(system))
    cycle = pulse_super_for_mode(sequence, system, relaxation, mode, dt_max, include, frame)

    if delay > 0:
        wait = free_evolution(delay, sequence.omega_d)
        cycle = cycle.then(pulse_super(wait, system, relaxation, dt_max, include, frame))

    return cycle


def saturation_cycles(period: float, relaxation: RelaxationParams) -> int:
    """Cycles needed for a train to cover SATURATION_LIFETIMES of the slowest process."""
    if not isfinite(period) or period <= 0:
        raise ValueError(f"cycle period must be finite and > 0, got {period}")

    return max(1, ceil(SATURATION_LIFETIMES * max(relaxation.T1e, relaxation.Tzq) / period))
