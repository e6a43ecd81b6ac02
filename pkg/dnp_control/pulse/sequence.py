from dataclasses import dataclass
from enum import Enum
from math import isfinite
from typing import Sequence

import numpy as np
import numpy.typing as npt
from adaptix import Retort, enum_by_name

from dnp_control.quantum import ReferenceFrame
from dnp_control.util import ConfigError, ReprInfo, SerializableData
from dnp_control.util.types import RealVector

# Rabi frequency reachable by the microwave setup, in Hz.
DEFAULT_RABI_FREQUENCY = 8e6


class SegmentState(str, Enum):
    ON = "on"
    OFF = "off"


@dataclass(frozen=True)
class Segment(SerializableData, ReprInfo):
    state: SegmentState
    duration: float

    def __repr_data__(self) -> dict:
        return {"state": self.state.value, "duration": self.duration}


@dataclass(frozen=True)
class PulseSequence(SerializableData, ReprInfo):
    """On/off modulated microwave drive.

    Durations are in seconds and `omega_d` is the Rabi frequency in Hz of
    the on segments. Saved records round trip exactly through JSON floats.

    Usage:
    ::

        sequence = PulseSequence.from_durations([1e-8, 3e-8, 2e-8])
        sequence.save_to_file(Path("pulse_open.json"))
        PulseSequence.load_from_file(Path("pulse_open.json")) == sequence  # True
    """

    segments: tuple[Segment, ...]
    omega_d: float = DEFAULT_RABI_FREQUENCY
    carrier: ReferenceFrame = ReferenceFrame.ROTATING

    @classmethod
    def get_serialization_settings(cls) -> Retort:
        return super().get_serialization_settings().extend(
            recipe=[enum_by_name(ReferenceFrame)],
        )

    @classmethod
    def create(
        cls,
        segments: Sequence[Segment],
        omega_d: float = DEFAULT_RABI_FREQUENCY,
        carrier: ReferenceFrame = ReferenceFrame.ROTATING,
    ) -> "PulseSequence":
        """Create a validated sequence.

        Raises:
            ConfigError: A duration is negative, the total is zero or the
                Rabi frequency is not positive.
        """
        sequence = cls(tuple(segments), omega_d, carrier)

        problems = sequence.check()
        if not problems and sequence.total_duration <= 0:
            problems.append("pulse.segments: total duration must be > 0")

        if problems:
            raise ConfigError(problems)

        return sequence

    @classmethod
    def from_durations(
        cls,
        durations: npt.ArrayLike,
        omega_d: float = DEFAULT_RABI_FREQUENCY,
    ) -> "PulseSequence":
        """Delays and pulses in the pattern τ1, p1, τ2, ..., pn, τn+1."""
        durations = np.asarray(durations, dtype=np.float64).ravel()

        if durations.size < 3 or durations.size % 2 == 0:
            raise ValueError(
                f"need 2n+1 durations for n >= 1 pulses, got {durations.size}"
            )

        states = on_off_pattern(durations.size // 2)
        return cls(
            tuple(Segment(state, float(d)) for state, d in zip(states, durations)),
            omega_d,
        )

    def check(self) -> list[str]:
        problems = []

        if not isfinite(self.omega_d) or self.omega_d <= 0:
            problems.append(f"pulse.omega_d: must be finite and > 0, got {self.omega_d}")

        for index, segment in enumerate(self.segments):
            if not isfinite(segment.duration) or segment.duration < 0:
                problems.append(
                    f"pulse.segments.{index}.duration: must be finite and >= 0, "
                    + f"got {segment.duration}"
                )

        return problems

    @property
    def durations(self) -> RealVector:
        return np.array([segment.duration for segment in self.segments])

    @property
    def total_duration(self) -> float:
        return float(sum(segment.duration for segment in self.segments))

    @property
    def n_pulses(self) -> int:
        return sum(segment.state == SegmentState.ON for segment in self.segments)

    def with_omega_d(self, omega_d: float) -> "PulseSequence":
        return PulseSequence(self.segments, omega_d, self.carrier)

    def split(self, index: int, fraction: float) -> "PulseSequence":
        """Cut segment `index` into two consecutive segments of the same state."""
        if not 0 <= fraction <= 1:
            raise ValueError(f"fraction must lie in [0, 1], got {fraction}")

        segment = self.segments[index]
        first = Segment(segment.state, segment.duration * fraction)
        second = Segment(segment.state, segment.duration - first.duration)

        return PulseSequence(
            self.segments[:index] + (first, second) + self.segments[index + 1 :],
            self.omega_d,
            self.carrier,
        )

    def describe(self) -> str:
        return " ".join(
            f"{'p' if segment.state == SegmentState.ON else 'tau'}({segment.duration:.6g})"
            for segment in self.segments
        )

    def __repr_data__(self) -> dict:
        return {
            "pulses": self.n_pulses,
            "total": self.total_duration,
            "omega_d": self.omega_d,
        }


def on_off_pattern(n_pulses: int) -> tuple[SegmentState, ...]:
    if n_pulses < 1:
        raise ValueError(f"n_pulses must be >= 1, got {n_pulses}")

    return (SegmentState.OFF,) + (SegmentState.ON, SegmentState.OFF) * n_pulses


def hard_pulse_duration(omega_d: float) -> float:
    """Nominal π/2 duration 1/(4ω_d) for a Rabi frequency in Hz."""
    if not isfinite(omega_d) or omega_d <= 0:
        raise ValueError(f"Rabi frequency must be finite and > 0, got {omega_d}")

    return 1 / (4 * omega_d)


def hard_pulse(omega_d: float = DEFAULT_RABI_FREQUENCY) -> PulseSequence:
    """Single square π/2 pulse, the non optimized baseline."""
    return PulseSequence(
        (Segment(SegmentState.ON, hard_pulse_duration(omega_d)),),
        omega_d,
    )


def free_evolution(duration: float, omega_d: float = DEFAULT_RABI_FREQUENCY) -> PulseSequence:
    """Sequence without drive, the zero pulse reference."""
    return PulseSequence((Segment(SegmentState.OFF, duration),), omega_d)
