from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from math import isfinite
from typing import Callable, Mapping, Optional

import numpy as np

from dnp_control.dnp import RelaxationParams
from dnp_control.harness.buildup import asymptotic_enhancement
from dnp_control.pulse import DEFAULT_RABI_FREQUENCY, PulseSequence, hard_pulse
from dnp_control.quantum import SpinSystemParams
from dnp_control.util import ConfigError, Logger, ReprInfo, SerializableData
from dnp_control.util.types import RealMatrix

# Builds the pulse to use at a given Rabi frequency (Hz).
PulseFactory = Callable[[float], PulseSequence]


class SweepParameter(str, Enum):
    RABI_FREQUENCY = "rabi_frequency"
    ANISOTROPIC_B = "anisotropic_B"
    TDQ_RATIO = "tdq_ratio"


@dataclass(frozen=True)
class SweepSpec(SerializableData, ReprInfo):
    """Values of one parameter to scan, Hz for frequencies, T_dq/T_zq for ratios.

    Pulses run at `omega_d` unless the Rabi frequency itself is swept.
    """

    parameter: SweepParameter
    values: tuple[float, ...]
    omega_d: float = DEFAULT_RABI_FREQUENCY
    delay: float = 0.0

    def check(self) -> list[str]:
        problems = []

        if not self.values:
            problems.append("sweep.values: must not be empty")

        for index, value in enumerate(self.values):
            if not isfinite(value):
                problems.append(f"sweep.values.{index}: must be finite, got {value}")
            elif self.parameter != SweepParameter.ANISOTROPIC_B and value <= 0:
                problems.append(f"sweep.values.{index}: must be > 0, got {value}")

        if not isfinite(self.omega_d) or self.omega_d <= 0:
            problems.append(f"sweep.omega_d: must be finite and > 0, got {self.omega_d}")

        if not isfinite(self.delay) or self.delay < 0:
            problems.append(f"sweep.delay: must be finite and >= 0, got {self.delay}")

        return problems

    def __repr_data__(self) -> dict:
        return {"parameter": self.parameter.value, "points": len(self.values)}


def fixed_durations(sequence: PulseSequence) -> PulseFactory:
    """Keep the segment durations and only change the Rabi frequency."""
    return sequence.with_omega_d


def hard_pulse_factory() -> PulseFactory:
    """Hard pulse whose duration follows the Rabi frequency."""
    return hard_pulse


@dataclass(frozen=True)
class SweepTable(ReprInfo):
    """Asymptotic enhancement, one row per pulse label and one column per value."""

    spec: SweepSpec
    labels: tuple[str, ...]
    enhancements: RealMatrix

    def row(self, label: str) -> np.ndarray:
        return self.enhancements[self.labels.index(label)]

    def relative_range(self, label: str) -> float:
        """(max − min)/max |value| of one pulse over the sweep, 0 for an all zero row."""
        values = self.row(label)
        scale = np.max(np.abs(values))
        if scale == 0.0:
            return 0.0

        return float(np.ptp(values) / scale)

    def __repr_data__(self) -> dict:
        return {"parameter": self.spec.parameter.value, "pulses": len(self.labels)}


def sweep_point(
    spec: SweepSpec,
    factory: PulseFactory,
    value: float,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
) -> float:
    """Enhancement with the swept parameter set to `value`."""
    omega_d = spec.omega_d

    match spec.parameter:
        case SweepParameter.RABI_FREQUENCY:
            omega_d = value
        case SweepParameter.ANISOTROPIC_B:
            system = replace(system, B=value)
        case SweepParameter.TDQ_RATIO:
            relaxation = relaxation.with_tdq_ratio(value)

    return asymptotic_enhancement(factory(omega_d), system, relaxation, delay=spec.delay)


def sweep(
    spec: SweepSpec,
    pulses: Mapping[str, PulseFactory],
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    threads: Optional[int] = None,
) -> SweepTable:
    """Asymptotic enhancement of every pulse at every value of the sweep.

    Raises:
        ConfigError: The sweep is invalid.
    """
    if problems := spec.check():
        raise ConfigError(problems)

    labels = tuple(pulses)
    points = [(label, value) for label in labels for value in spec.values]

    def evaluate(point: tuple[str, float]) -> float:
        label, value = point
        enhancement = sweep_point(spec, pulses[label], value, system, relaxation)
        Logger.debug(f"{label} at {spec.parameter.value}={value:.6g}: {enhancement:.6g}")
        return enhancement

    with ThreadPoolExecutor(max_workers=threads) as executor:
        values = list(executor.map(evaluate, points))

    return SweepTable(spec, labels, np.array(values).reshape(len(labels), len(spec.values)))


@dataclass(frozen=True)
class DqLeakageReport(ReprInfo):
    labels: tuple[str, ...]
    baseline: tuple[float, ...]
    leakage: tuple[float, ...]
    tdq_ratio: float

    @property
    def all_lowered(self) -> bool:
        return all(after < before for before, after in zip(self.baseline, self.leakage))

    def __repr_data__(self) -> dict:
        return {"tdq_ratio": self.tdq_ratio, "all_lowered": self.all_lowered}


def dq_leakage_run(
    pulses: Mapping[str, PulseSequence],
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    delay: float = 0.0,
    threads: Optional[int] = None,
) -> DqLeakageReport:
    """Asymptotic enhancements with and without double quantum relaxation.

    Raises:
        MissingParameterError: `relaxation.Tdq` is not set.
    """
    tdq = relaxation.require_tdq()
    baseline_relaxation = relaxation.without_tdq()
    labels = tuple(pulses)

    def evaluate(task: tuple[str, RelaxationParams]) -> float:
        label, params = task
        return asymptotic_enhancement(pulses[label], system, params, delay=delay)

    tasks = [(label, baseline_relaxation) for label in labels]
    tasks += [(label, relaxation) for label in labels]

    with ThreadPoolExecutor(max_workers=threads) as executor:
        values = list(executor.map(evaluate, tasks))

    report = DqLeakageReport(
        labels,
        tuple(values[: len(labels)]),
        tuple(values[len(labels) :]),
        tdq / relaxation.Tzq,
    )
    if not report.all_lowered:
        Logger.warning(f"double quantum relaxation did not lower every enhancement: {report!r}")

    return report
