from dataclasses import dataclass, field, replace
from math import isfinite
from pathlib import Path
from typing import Optional

import numpy as np

from dnp_control.dnp import RelaxationParams
from dnp_control.harness import (
    ANGLE_MAP_PRESETS,
    AngleMapSpec,
    SweepParameter,
    SweepSpec,
    angle_map_preset,
)
from dnp_control.pulse import DEFAULT_RABI_FREQUENCY, OptimizerConfig, PulseMode
from dnp_control.quantum import SpinSystemParams
from dnp_control.util import ConfigError, Logger, ReprInfo, SerializableData

PROFILE_DIR = Path(__file__).parent.parent / "profiles"
DEFAULT_PROFILE = PROFILE_DIR / "malonic_acid.json"

# Named pulses understood by `buildup.pulse`; anything else is a pulse file.
BUILTIN_PULSES = ("hard", "ideal-oe", "ideal-se")


def _positive(section: str, name: str, value: float) -> list[str]:
    if not isfinite(value) or value <= 0:
        return [f"{section}.{name}: must be finite and > 0, got {value}"]

    return []


@dataclass(frozen=True)
class BuildupConfig(SerializableData):
    pulse: str = "hard"
    total_time: float = 1.0
    readout_stride: float = 0.01
    delay: float = 0.0
    mode: PulseMode = PulseMode.OPEN
    omega_d: float = DEFAULT_RABI_FREQUENCY

    def check(self) -> list[str]:
        problems = _positive("buildup", "total_time", self.total_time)
        problems += _positive("buildup", "readout_stride", self.readout_stride)
        problems += _positive("buildup", "omega_d", self.omega_d)

        if not isfinite(self.delay) or self.delay < 0:
            problems.append(f"buildup.delay: must be finite and >= 0, got {self.delay}")

        if not problems and self.readout_stride > self.total_time:
            problems.append("buildup.readout_stride: must not exceed buildup.total_time")

        return problems


@dataclass(frozen=True)
class AngleMapConfig(SerializableData):
    preset: str = "a"
    grid: int = 32
    delay: Optional[float] = None

    def check(self) -> list[str]:
        if self.preset.lower() not in ANGLE_MAP_PRESETS:
            return [f"angle_map.preset: unknown preset {self.preset!r}, expected one of a-e"]

        return self.to_spec().check()

    def to_spec(self) -> AngleMapSpec:
        return replace(angle_map_preset(self.preset, self.grid), delay=self.delay)


def _default_rabi_grid() -> tuple[float, ...]:
    return tuple(float(value) for value in np.arange(2e6, 30.5e6, 1e6))


@dataclass(frozen=True)
class SweepConfig(SerializableData):
    """Sweep of the hard pulse and of every pulse file at fixed durations."""

    parameter: SweepParameter = SweepParameter.RABI_FREQUENCY
    values: tuple[float, ...] = field(default_factory=_default_rabi_grid)
    omega_d: float = DEFAULT_RABI_FREQUENCY
    delay: float = 0.0
    pulse_files: tuple[str, ...] = ()

    def to_spec(self) -> SweepSpec:
        return SweepSpec(self.parameter, self.values, self.omega_d, self.delay)

    def check(self) -> list[str]:
        return self.to_spec().check()


@dataclass(frozen=True)
class DqLeakageConfig(SerializableData):
    tdq_ratio: float = 2.0
    delay: float = 0.0
    pulse_files: tuple[str, ...] = ()

    def check(self) -> list[str]:
        problems = _positive("dq_leakage", "tdq_ratio", self.tdq_ratio)

        if not isfinite(self.delay) or self.delay < 0:
            problems.append(f"dq_leakage.delay: must be finite and >= 0, got {self.delay}")

        return problems


@dataclass(frozen=True)
class ChannelCheckConfig(SerializableData):
    time_steps: tuple[float, ...] = (1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3)
    tolerance: float = 1e-9

    def check(self) -> list[str]:
        problems = _positive("channel_check", "tolerance", self.tolerance)

        if not self.time_steps:
            problems.append("channel_check.time_steps: must not be empty")

        for index, step in enumerate(self.time_steps):
            if not isfinite(step) or step < 0:
                problems.append(
                    f"channel_check.time_steps.{index}: must be finite and >= 0, got {step}"
                )

        return problems


@dataclass(frozen=True)
class RunConfig(SerializableData, ReprInfo):
    """Everything a run needs; each command reads its own section.

    `seed` seeds every random draw of the run, so it replaces
    `optimize.rng_seed`. `out` is the output directory.
    """

    system: SpinSystemParams = field(default_factory=SpinSystemParams)
    relaxation: RelaxationParams = field(default_factory=RelaxationParams)
    optimize: OptimizerConfig = field(default_factory=OptimizerConfig)
    buildup: BuildupConfig = field(default_factory=BuildupConfig)
    angle_map: AngleMapConfig = field(default_factory=AngleMapConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    dq_leakage: DqLeakageConfig = field(default_factory=DqLeakageConfig)
    channel_check: ChannelCheckConfig = field(default_factory=ChannelCheckConfig)
    seed: int = 0
    out: str = "results"

    def check(self) -> list[str]:
        problems = []

        for section in (
            self.system,
            self.relaxation,
            self.optimize,
            self.buildup,
            self.angle_map,
            self.sweep,
            self.dq_leakage,
            self.channel_check,
        ):
            problems += section.check()

        if not 0 <= self.seed < 2**64:
            problems.append(f"seed: must be an unsigned 64 bit integer, got {self.seed}")

        return problems

    def with_overrides(
        self,
        seed: Optional[int] = None,
        out: Optional[Path] = None,
    ) -> "RunConfig":
        config = self
        if seed is not None:
            config = replace(config, seed=seed)
        if out is not None:
            config = replace(config, out=str(out))

        return replace(config, optimize=replace(config.optimize, rng_seed=config.seed))

    def __repr_data__(self) -> dict:
        return {"system": self.system, "relaxation": self.relaxation, "seed": self.seed}


def parse_config(path: Optional[Path] = None) -> RunConfig:
    """Load and validate a run configuration, the bundled profile by default.

    Raises:
        ConfigError: Every parse and range problem found, one line each.
    """
    path = path or DEFAULT_PROFILE

    try:
        config = RunConfig.load_from_file(path)
    except FileNotFoundError:
        raise ConfigError([f"config file not found: {path}"]) from None

    if problems := config.check():
        raise ConfigError(problems)

    # range errors are fatal, the secular regime only warns
    config.system.validate()
    Logger.debug(f"loaded {path}: {config!r}")

    return config
