"""Relaxation channels as Kraus sets on pairs of dressed levels.

Each channel relaxes the population ratio of its level pairs towards the
Boltzmann weight of a gap while leaving the other levels alone. The
operators are built in the dressed drift eigenbasis and rotated back.
"""

from enum import Enum
from math import exp, isfinite, sqrt
from typing import Sequence

import numpy as np
from scipy.constants import Boltzmann, Planck
from scipy.special import expit

from dnp_control.channels import KrausSet
from dnp_control.dnp.params import RelaxationParams
from dnp_control.quantum import Frame, SpinSystemParams, Transition
from dnp_control.util import DimensionError, EnumExtend


class RelaxationKind(EnumExtend[tuple[Transition, ...]], str, Enum):
    T1E = "T1e"
    TX = "Tx"
    TDQ = "Tdq"

    @classmethod
    def _get_value_map(cls) -> dict["RelaxationKind", tuple[Transition, ...]]:
        return {
            RelaxationKind.T1E: (Transition.ELECTRON_ALPHA, Transition.ELECTRON_BETA),
            RelaxationKind.TX: (Transition.ZERO_QUANTUM,),
            RelaxationKind.TDQ: (Transition.DOUBLE_QUANTUM,),
        }


def upper_level_weight(gap: float, temperature: float) -> float:
    """Normalized Boltzmann weight of the upper level of a two level gap (Hz)."""
    return float(expit(-Planck * gap / (Boltzmann * temperature)))


def pair_relaxation(
    pairs: Sequence[tuple[int, int]],
    population: float,
    epsilon: float,
    frame: Frame,
) -> KrausSet:
    """Four Kraus operators relaxing each (upper, lower) dressed pair.

    `population` is the stationary upper level weight p of every pair and
    `epsilon` the surviving fraction exp(-dt/T). Levels outside the pairs are
    untouched.
    """
    if frame.dim != 4:
        raise DimensionError(f"relaxation channels need a two spin frame, got dim {frame.dim}")

    if not 0 <= population <= 1 or not 0 <= epsilon <= 1:
        raise ValueError(f"weights out of [0, 1]: p={population}, eps={epsilon}")

    upper = np.zeros((4, 4))
    lower = np.zeros((4, 4))
    raise_op = np.zeros((4, 4))

    for upper_level, lower_level in pairs:
        upper[upper_level, upper_level] = 1
        lower[lower_level, lower_level] = 1
        raise_op[upper_level, lower_level] = 1

    rest = np.eye(4) - upper - lower
    root_eps = sqrt(epsilon)
    p = population

    dressed = [
        sqrt(p) * (rest + upper + root_eps * lower),
        sqrt(p * (1 - epsilon)) * raise_op,
        sqrt(1 - p) * (rest + root_eps * upper + lower),
        sqrt((1 - p) * (1 - epsilon)) * raise_op.T,
    ]

    return KrausSet.create([frame.from_dressed(op) for op in dressed if np.any(op)])


def _decay(dt: float, lifetime: float) -> float:
    if not isfinite(dt) or dt < 0:
        raise ValueError(f"time step must be finite and >= 0, got {dt}")

    return exp(-dt / lifetime)


def _pairs(kind: RelaxationKind) -> list[tuple[int, int]]:
    return [transition.levels for transition in RelaxationKind.get_mapped_value(kind)]


def t1e_channel(
    dt: float,
    relaxation: RelaxationParams,
    system: SpinSystemParams,
    frame: Frame,
) -> KrausSet:
    """Electron T1 on both electron transitions, gap ω_S."""
    temperature = relaxation.temperature_for(system)
    return pair_relaxation(
        _pairs(RelaxationKind.T1E),
        upper_level_weight(system.omega_S, temperature),
        _decay(dt, relaxation.T1e),
        frame,
    )


def tx_channel(
    dt: float,
    relaxation: RelaxationParams,
    system: SpinSystemParams,
    frame: Frame,
) -> KrausSet:
    """Zero quantum cross relaxation, gap ω_S − ω_I."""
    temperature = relaxation.temperature_for(system)
    return pair_relaxation(
        _pairs(RelaxationKind.TX),
        upper_level_weight(system.omega_S - system.omega_I, temperature),
        _decay(dt, relaxation.Tzq),
        frame,
    )


def tdq_channel(
    dt: float,
    relaxation: RelaxationParams,
    system: SpinSystemParams,
    frame: Frame,
) -> KrausSet:
    """Double quantum relaxation, gap ω_S + ω_I.

    Raises:
        MissingParameterError: `relaxation.Tdq` is not set.
    """
    lifetime = relaxation.require_tdq()
    temperature = relaxation.temperature_for(system)
    return pair_relaxation(
        _pairs(RelaxationKind.TDQ),
        upper_level_weight(system.omega_S + system.omega_I, temperature),
        _decay(dt, lifetime),
        frame,
    )


def relaxation_channel(
    kind: RelaxationKind,
    dt: float,
    relaxation: RelaxationParams,
    system: SpinSystemParams,
    frame: Frame,
) -> KrausSet:
    builder = {
        RelaxationKind.T1E: t1e_channel,
        RelaxationKind.TX: tx_channel,
        RelaxationKind.TDQ: tdq_channel,
    }[kind]

    return builder(dt, relaxation, system, frame)
