import warnings
from dataclasses import dataclass, field
from enum import Enum
from math import ceil, isfinite
from typing import AbstractSet, NamedTuple, Optional, Union

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from dnp_control.channels import SuperMatrix, fixed_point
from dnp_control.dnp import (
    RelaxationKind,
    RelaxationParams,
    angle_cycle_map,
    configured_channels,
    state_enhancement,
)
from dnp_control.pulse import (
    PulseMode,
    PulseSequence,
    free_evolution,
    pulse_super,
    saturation_cycle,
)
from dnp_control.quantum import (
    DensityMatrix,
    Frame,
    SpinSystemParams,
    drift_hamiltonian,
    eigenframe,
    equilibrium_state,
)
from dnp_control.util import CheckStatus, Logger, ReprInfo, ResultWithStatus
from dnp_control.util.types import RealVector, TransitionAngles

TrainPulse = Union[PulseSequence, TransitionAngles]

MIN_FIT_POINTS = 4


@dataclass(frozen=True)
class BuildupCurve(ReprInfo):
    """Enhancement sampled along a saturation train or a free decay.

    `baseline` is the level the curve starts from (buildup) or relaxes to
    (decay); fits work on the enhancement relative to it.
    """

    times: tuple[float, ...]
    enhancements: tuple[float, ...]
    metadata: dict[str, str] = field(default_factory=dict)
    baseline: float = 0.0
    asymptote: Optional[float] = None

    def __post_init__(self) -> None:
        if len(self.times) != len(self.enhancements):
            raise ValueError(
                f"{len(self.times)} times for {len(self.enhancements)} enhancements"
            )

        if np.any(np.diff(self.times) <= 0):
            raise ValueError("curve times must be strictly increasing")

    @property
    def is_monotone(self) -> bool:
        steps = np.diff(self.enhancements)
        return bool(np.all(steps >= 0) or np.all(steps <= 0))

    def __repr_data__(self) -> dict:
        return {
            "points": len(self.times),
            "final": self.enhancements[-1] if self.enhancements else None,
            "asymptote": self.asymptote,
        }


def describe_pulse(pulse: TrainPulse) -> str:
    if isinstance(pulse, PulseSequence):
        return pulse.describe()

    return "angles(" + ", ".join(f"{angle:.6g}" for angle in pulse) + ")"


def train_cycle(
    pulse: TrainPulse,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    delay: float = 0.0,
    mode: PulseMode = PulseMode.OPEN,
    include: Optional[AbstractSet[RelaxationKind]] = None,
    frame: Optional[Frame] = None,
    dt_max: Optional[float] = None,
) -> tuple[SuperMatrix, float]:
    """Supermatrix and period of one train repetition.

    Angle pulses are instantaneous rotations followed by `delay`, which
    defaults to min(T1e, T_zq)/100 for them.
    """
    frame = frame or eigenframe(drift_hamiltonian(system))

    if isinstance(pulse, PulseSequence):
        cycle = saturation_cycle(pulse, system, relaxation, delay, mode, dt_max, include, frame)
        return cycle, pulse.total_duration + delay

    period = delay if delay > 0 else relaxation.default_time_step()
    include = configured_channels(relaxation) if include is None else include

    return angle_cycle_map(tuple(pulse), relaxation, system, frame, period, include), period


def asymptotic_enhancement(
    pulse: TrainPulse,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    delay: float = 0.0,
    mode: PulseMode = PulseMode.OPEN,
    include: Optional[AbstractSet[RelaxationKind]] = None,
    frame: Optional[Frame] = None,
) -> float:
    """Enhancement of the fixed point of one train repetition."""
    frame = frame or eigenframe(drift_hamiltonian(system))
    cycle, _ = train_cycle(pulse, system, relaxation, delay, mode, include, frame)

    state = fixed_point(cycle, reference=equilibrium_state(system, frame))
    return state_enhancement(state, system, frame).enhancement


def parameter_snapshot(
    system: SpinSystemParams, relaxation: RelaxationParams
) -> dict[str, str]:
    """Every physical parameter as `section.name` -> repr, exact to the bit."""
    values = {f"system.{key}": value for key, value in system.to_data().items()}
    values.update({f"relaxation.{key}": value for key, value in relaxation.to_data().items()})

    return {key: repr(value) for key, value in values.items()}


def _sample(
    step: SuperMatrix,
    rho: DensityMatrix,
    n_readouts: int,
    system: SpinSystemParams,
    frame: Frame,
) -> list[float]:
    values = [state_enhancement(rho, system, frame).enhancement]

    for index in range(n_readouts):
        rho = step.apply(rho)
        values.append(state_enhancement(rho, system, frame).enhancement)
        Logger.debug(f"readout {index + 1}/{n_readouts}: {values[-1]:.6g}")

    return values


def run_saturation_train(
    pulse: TrainPulse,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    total_time: float,
    readout_stride: float,
    delay: float = 0.0,
    mode: PulseMode = PulseMode.OPEN,
    include: Optional[AbstractSet[RelaxationKind]] = None,
    frame: Optional[Frame] = None,
) -> BuildupCurve:
    """Enhancement buildup under a repeated pulse, starting at equilibrium.

    Readouts are taken every whole number of repetitions closest to
    `readout_stride` seconds until `total_time` is covered. The asymptote is
    the fixed point of one repetition.

    Raises:
        ValueError: `total_time` or `readout_stride` is not positive.
    """
    for name, value in (("total_time", total_time), ("readout_stride", readout_stride)):
        if not isfinite(value) or value <= 0:
            raise ValueError(f"{name} must be finite and > 0, got {value}")

    frame = frame or eigenframe(drift_hamiltonian(system))
    cycle, period = train_cycle(pulse, system, relaxation, delay, mode, include, frame)

    stride_cycles = max(1, round(readout_stride / period))
    stride = stride_cycles * period
    n_readouts = max(1, ceil(total_time / stride - 1e-9))

    rho = equilibrium_state(system, frame)
    values = _sample(cycle.power(stride_cycles), rho, n_readouts, system, frame)
    asymptote = state_enhancement(fixed_point(cycle, reference=rho), system, frame).enhancement

    curve = BuildupCurve(
        times=tuple(float(index * stride) for index in range(n_readouts + 1)),
        enhancements=tuple(values),
        metadata={"pulse": describe_pulse(pulse), "period": repr(period), "mode": mode.value}
        | parameter_snapshot(system, relaxation),
        baseline=values[0],
        asymptote=asymptote,
    )

    if not curve.is_monotone:
        Logger.info(f"buildup for {describe_pulse(pulse)} is not monotone")

    return curve


def run_decay(
    initial: DensityMatrix,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    total_time: float,
    readout_stride: float,
    include: Optional[AbstractSet[RelaxationKind]] = None,
    frame: Optional[Frame] = None,
) -> BuildupCurve:
    """Enhancement after the drive stops, relaxing back to equilibrium."""
    for name, value in (("total_time", total_time), ("readout_stride", readout_stride)):
        if not isfinite(value) or value <= 0:
            raise ValueError(f"{name} must be finite and > 0, got {value}")

    frame = frame or eigenframe(drift_hamiltonian(system))
    step = pulse_super(
        free_evolution(readout_stride), system, relaxation, include=include, frame=frame
    )
    n_readouts = max(1, ceil(total_time / readout_stride - 1e-9))

    values = _sample(step, initial, n_readouts, system, frame)
    equilibrium = state_enhancement(equilibrium_state(system, frame), system, frame)

    return BuildupCurve(
        times=tuple(float(index * readout_stride) for index in range(n_readouts + 1)),
        enhancements=tuple(values),
        metadata={"pulse": "none"} | parameter_snapshot(system, relaxation),
        baseline=equilibrium.enhancement,
        asymptote=equilibrium.enhancement,
    )


class FitKind(str, Enum):
    BUILDUP = "buildup"
    DECAY = "decay"


class ExponentialFit(NamedTuple):
    amplitude: float
    time_constant: float
    residual: float
    degenerate: bool = False


def _model(kind: FitKind):
    if kind == FitKind.BUILDUP:
        return lambda t, a, tau: a * (1 - np.exp(-t / tau))

    return lambda t, a, tau: a * np.exp(-t / tau)


def fit_exponential(
    curve: BuildupCurve,
    kind: FitKind = FitKind.BUILDUP,
) -> ResultWithStatus[ExponentialFit]:
    """Least squares a(1−e^{−t/τ}) or a·e^{−t/τ} fit relative to the baseline.

    Times are measured from the first sample. The result fails when the fit
    does not converge or τ is not identifiable, e.g. for a flat curve.

    Raises:
        ValueError: Fewer than four points.
    """
    if len(curve.times) < MIN_FIT_POINTS:
        raise ValueError(f"fit needs at least {MIN_FIT_POINTS} points, got {len(curve.times)}")

    t: RealVector = np.asarray(curve.times) - curve.times[0]
    y: RealVector = np.asarray(curve.enhancements) - curve.baseline
    span = float(t[-1])

    amplitude0 = float(y[-1] if kind == FitKind.BUILDUP else y[0])
    model = _model(kind)

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            (amplitude, tau), _ = curve_fit(
                model, t, y, p0=(amplitude0 or 1.0, span / 3), maxfev=10000
            )
    except (RuntimeError, ValueError) as error:
        Logger.warning(f"{kind.value} fit did not converge: {error}")
        residual = float(np.sqrt(np.mean((y - amplitude0) ** 2)))
        fit = ExponentialFit(amplitude0, float("nan"), residual, True)
        return ResultWithStatus(CheckStatus.FAILED, fit)

    residual = float(np.sqrt(np.mean((model(t, amplitude, tau) - y) ** 2)))
    scale = max(1.0, float(np.max(np.abs(y))))
    degenerate = (
        not isfinite(tau)
        or tau <= 0
        or tau > 1e3 * span
        or abs(amplitude) < 1e-9 * scale
    )

    fit = ExponentialFit(float(amplitude), float(tau), residual, degenerate)
    if degenerate:
        Logger.info(f"{kind.value} fit has no identifiable time constant: {fit}")
        return ResultWithStatus(CheckStatus.FAILED, fit)

    return ResultWithStatus(CheckStatus.PASSED, fit)
