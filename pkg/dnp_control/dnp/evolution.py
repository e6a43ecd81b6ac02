from math import ceil
from typing import AbstractSet, Optional

import numpy.typing as npt

from dnp_control.channels import KrausSet, SuperMatrix, compose, kraus_to_super
from dnp_control.dnp.params import RelaxationParams
from dnp_control.dnp.relaxation import RelaxationKind, relaxation_channel
from dnp_control.quantum import Frame, SpinSystemParams, propagator
from dnp_control.util import Logger

DEFAULT_CHANNELS: frozenset[RelaxationKind] = frozenset(
    {RelaxationKind.T1E, RelaxationKind.TX}
)

# Channels act in this order after the unitary part of a step.
_APPLY_ORDER = (RelaxationKind.TX, RelaxationKind.TDQ, RelaxationKind.T1E)

# First order splitting needs dt well below every included lifetime.
MAX_STEP_FRACTION = 1 / 20

# Slices per shortest lifetime in `sliced_relaxation_super`.
SLICES_PER_LIFETIME = 2000


def _lifetimes(relaxation: RelaxationParams) -> dict[RelaxationKind, Optional[float]]:
    return {
        RelaxationKind.T1E: relaxation.T1e,
        RelaxationKind.TX: relaxation.Tzq,
        RelaxationKind.TDQ: relaxation.Tdq,
    }


def configured_channels(relaxation: RelaxationParams) -> frozenset[RelaxationKind]:
    """T1e and T_x, plus T_dq when its lifetime is set."""
    if relaxation.Tdq is None:
        return DEFAULT_CHANNELS

    return DEFAULT_CHANNELS | {RelaxationKind.TDQ}


def check_time_step(
    dt: float,
    relaxation: RelaxationParams,
    include: AbstractSet[RelaxationKind],
) -> None:
    lifetimes = _lifetimes(relaxation)

    for kind in _APPLY_ORDER:
        lifetime = lifetimes[kind]
        if kind in include and lifetime is not None and dt > lifetime * MAX_STEP_FRACTION:
            Logger.warning(
                f"time step {dt:.3g} s exceeds {kind.value}/20 = "
                + f"{lifetime * MAX_STEP_FRACTION:.3g} s, splitting error is not small"
            )


def relaxation_channels(
    dt: float,
    relaxation: RelaxationParams,
    system: SpinSystemParams,
    frame: Frame,
    include: AbstractSet[RelaxationKind] = DEFAULT_CHANNELS,
) -> list[KrausSet]:
    """Included channels in application order."""
    return [
        relaxation_channel(kind, dt, relaxation, system, frame)
        for kind in _APPLY_ORDER
        if kind in include
    ]


def evolution_step(
    hamiltonian: npt.ArrayLike,
    dt: float,
    relaxation: RelaxationParams,
    system: SpinSystemParams,
    frame: Frame,
    include: AbstractSet[RelaxationKind] = DEFAULT_CHANNELS,
) -> KrausSet:
    """One first order step: exp(-iH·dt), then T_x, T_dq and T1e.

    Raises:
        MissingParameterError: T_dq is included but not configured.
    """
    check_time_step(dt, relaxation, include)

    step = KrausSet.unitary(propagator(hamiltonian, dt))
    for channel in relaxation_channels(dt, relaxation, system, frame, include):
        step = compose(channel, step)

    return step


def relaxation_super(
    dt: float,
    relaxation: RelaxationParams,
    system: SpinSystemParams,
    frame: Frame,
    include: AbstractSet[RelaxationKind] = DEFAULT_CHANNELS,
) -> SuperMatrix:
    """Supermatrix of the included relaxation channels alone."""
    supermatrix = SuperMatrix.identity(4)
    for channel in relaxation_channels(dt, relaxation, system, frame, include):
        supermatrix = supermatrix.then(kraus_to_super(channel))

    return supermatrix


def evolution_super(
    hamiltonian: npt.ArrayLike,
    dt: float,
    relaxation: RelaxationParams,
    system: SpinSystemParams,
    frame: Frame,
    include: AbstractSet[RelaxationKind] = DEFAULT_CHANNELS,
) -> SuperMatrix:
    """`evolution_step` composed at the supermatrix level."""
    check_time_step(dt, relaxation, include)

    unitary = kraus_to_super(KrausSet.unitary(propagator(hamiltonian, dt)))
    return unitary.then(relaxation_super(dt, relaxation, system, frame, include))


def relaxation_slices(
    dt: float,
    relaxation: RelaxationParams,
    include: AbstractSet[RelaxationKind] = DEFAULT_CHANNELS,
) -> int:
    """Number of equal slices keeping each below shortest lifetime/2000."""
    lifetimes = _lifetimes(relaxation)
    included = [lifetimes[kind] for kind in include if lifetimes[kind] is not None]
    if not included or dt <= 0:
        return 1

    return max(1, ceil(dt * SLICES_PER_LIFETIME / min(included) - 1e-9))


def sliced_relaxation_super(
    dt: float,
    relaxation: RelaxationParams,
    system: SpinSystemParams,
    frame: Frame,
    include: AbstractSet[RelaxationKind] = DEFAULT_CHANNELS,
) -> SuperMatrix:
    """Relaxation over `dt` as repeated short T_x, T_dq, T1e steps.

    T_x then sees the electron state averaged over the interval rather than
    the state at its start.
    """
    slices = relaxation_slices(dt, relaxation, include)
    return relaxation_super(dt / slices, relaxation, system, frame, include).power(slices)
