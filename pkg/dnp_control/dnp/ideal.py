from math import pi
from typing import AbstractSet, Optional

import numpy as np
from scipy.linalg import expm

from dnp_control.channels import KrausSet, SuperMatrix, kraus_to_super
from dnp_control.dnp.evolution import DEFAULT_CHANNELS, sliced_relaxation_super
from dnp_control.dnp.params import RelaxationParams
from dnp_control.dnp.relaxation import RelaxationKind
from dnp_control.quantum import (
    DnpMechanism,
    Frame,
    SpinSystemParams,
    Transition,
    drift_hamiltonian,
    eigenframe,
)
from dnp_control.util.types import ComplexMatrix, TransitionAngles

OE_ANGLES: TransitionAngles = (pi / 2, pi / 2, 0.0, 0.0)
SE_ANGLES: TransitionAngles = (0.0, 0.0, pi / 2, 0.0)


def transition_angle_unitary(angles: TransitionAngles, frame: Frame) -> ComplexMatrix:
    """exp(-i Σ θ_i X_i / 2) with X_i the σ_x of transition i in the dressed basis."""
    generator = np.zeros((4, 4), dtype=np.complex128)

    for transition, angle in zip(Transition, angles, strict=True):
        upper, lower = transition.levels
        generator[upper, lower] += angle / 2
        generator[lower, upper] += angle / 2

    return frame.from_dressed(expm(-1j * generator))


def angle_cycle_map(
    angles: TransitionAngles,
    relaxation: RelaxationParams,
    system: SpinSystemParams,
    frame: Frame,
    dt: float,
    include: AbstractSet[RelaxationKind] = DEFAULT_CHANNELS,
) -> SuperMatrix:
    """One cycle: perfect rotation by `angles`, then sliced relaxation for `dt`."""
    rotation = kraus_to_super(KrausSet.unitary(transition_angle_unitary(angles, frame)))
    return rotation.then(sliced_relaxation_super(dt, relaxation, system, frame, include))


def ideal_dnp_map(
    kind: DnpMechanism,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    pulse_angle: float = pi / 2,
    n_cycles: int = 1,
    dt: Optional[float] = None,
    frame: Optional[Frame] = None,
) -> SuperMatrix:
    """Repeated perfect DNP cycle without drift.

    OE rotates both electron transitions, SE the zero quantum transition.
    Both then relax under T_x and T1e for `dt`, which defaults to
    min(T1e, T_zq)/100. Under SE the T_x flux through the pumped pair keeps
    an imaginary zero quantum coherence (XY = −YX) in the fixed point.
    """
    if n_cycles < 1:
        raise ValueError(f"n_cycles must be >= 1, got {n_cycles}")

    frame = frame or eigenframe(drift_hamiltonian(system))
    dt = relaxation.default_time_step() if dt is None else dt

    match kind:
        case DnpMechanism.OE:
            angles = (pulse_angle, pulse_angle, 0.0, 0.0)
        case DnpMechanism.SE:
            angles = (0.0, 0.0, pulse_angle, 0.0)
        case _:
            raise ValueError(f"unknown DNP mechanism: {kind!r}")

    cycle = angle_cycle_map(angles, relaxation, system, frame, dt, DEFAULT_CHANNELS)
    return cycle.power(n_cycles)
