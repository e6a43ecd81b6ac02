from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from math import isfinite, pi
from typing import Optional

import numpy as np

from dnp_control.dnp import RelaxationParams, configured_channels
from dnp_control.harness.buildup import asymptotic_enhancement
from dnp_control.quantum import (
    Frame,
    SpinSystemParams,
    Transition,
    drift_hamiltonian,
    eigenframe,
)
from dnp_control.util import ConfigError, Logger, ReprInfo, SerializableData
from dnp_control.util.types import RealMatrix, RealVector, TransitionAngles

DEFAULT_GRID = 32
HALF_PI = pi / 2


@dataclass(frozen=True)
class AngleMapSpec(SerializableData, ReprInfo):
    """Slice of the four transition angle space.

    Every transition listed on an axis rotates by that axis value; the other
    transitions keep their `fixed` angle. Axis values run over
    linspace(lo, hi, grid, endpoint=False), so π/2 is on the default grid.
    `delay` is the time between rotations, min(T1e, T_zq)/100 when unset.
    """

    fixed: tuple[float, float, float, float] = (HALF_PI, HALF_PI, 0.0, 0.0)
    x_axis: tuple[Transition, ...] = (Transition.ELECTRON_ALPHA,)
    y_axis: tuple[Transition, ...] = (Transition.ZERO_QUANTUM,)
    x_range: tuple[float, float] = (0.0, pi)
    y_range: tuple[float, float] = (0.0, pi)
    grid: int = DEFAULT_GRID
    delay: Optional[float] = None

    def check(self) -> list[str]:
        problems = []

        for index, angle in enumerate(self.fixed):
            if not 0 <= angle <= pi:
                problems.append(f"angle_map.fixed.{index}: must lie in [0, pi], got {angle}")

        for name in ("x_range", "y_range"):
            lo, hi = getattr(self, name)
            if not 0 <= lo < hi <= pi:
                problems.append(f"angle_map.{name}: need 0 <= lo < hi <= pi, got {(lo, hi)}")

        if not self.x_axis or not self.y_axis:
            problems.append("angle_map: both axes need at least one transition")
        elif set(self.x_axis) & set(self.y_axis):
            problems.append("angle_map: a transition cannot be on both axes")

        if self.grid < 2:
            problems.append(f"angle_map.grid: must be >= 2, got {self.grid}")

        if self.delay is not None and (not isfinite(self.delay) or self.delay <= 0):
            problems.append(f"angle_map.delay: must be finite and > 0, got {self.delay}")

        return problems

    @property
    def x_values(self) -> RealVector:
        return np.linspace(*self.x_range, self.grid, endpoint=False)

    @property
    def y_values(self) -> RealVector:
        return np.linspace(*self.y_range, self.grid, endpoint=False)

    def angles_at(self, x: float, y: float) -> TransitionAngles:
        angles = list(self.fixed)

        for transition in self.x_axis:
            angles[transition - 1] = x
        for transition in self.y_axis:
            angles[transition - 1] = y

        return (angles[0], angles[1], angles[2], angles[3])

    def __repr_data__(self) -> dict:
        return {
            "x": "+".join(str(int(t)) for t in self.x_axis),
            "y": "+".join(str(int(t)) for t in self.y_axis),
            "grid": self.grid,
        }


T1, T2, T3, T4 = Transition

ANGLE_MAP_PRESETS: dict[str, AngleMapSpec] = {
    # Increasing saturation on transitions 1 and 3 while applying π/2 pulses to 2.
    "a": AngleMapSpec(fixed=(0.0, HALF_PI, 0.0, 0.0), x_axis=(T1,), y_axis=(T3,)),
    # Increasing 2 and 3, with π/2 pulses on the other electron resonance, 1.
    "b": AngleMapSpec(fixed=(HALF_PI, 0.0, 0.0, 0.0), x_axis=(T2,), y_axis=(T3,)),
    # Increasing 2 and 4 with full π/2 saturation on 1.
    "c": AngleMapSpec(fixed=(HALF_PI, 0.0, 0.0, 0.0), x_axis=(T2,), y_axis=(T4,)),
    # Increasing 3 and 4 with both electron resonances saturated.
    "d": AngleMapSpec(fixed=(HALF_PI, HALF_PI, 0.0, 0.0), x_axis=(T3,), y_axis=(T4,)),
    # Increasing the electron resonances together and 4, with π/2 pulses on 3.
    "e": AngleMapSpec(fixed=(0.0, 0.0, HALF_PI, 0.0), x_axis=(T1, T2), y_axis=(T4,)),
}


def angle_map_preset(name: str, grid: int = DEFAULT_GRID) -> AngleMapSpec:
    """Preset slice (a) to (e); the Overhauser optimum lies on (a) and (c)."""
    try:
        preset = ANGLE_MAP_PRESETS[name.lower()]
    except KeyError:
        raise ConfigError(
            [f"angle_map.preset: unknown preset {name!r}, expected one of a-e"]
        ) from None

    return replace(preset, grid=grid)


@dataclass(frozen=True)
class AngleMapResult(ReprInfo):
    """Row i of `enhancements` holds y_values[i], column j holds x_values[j]."""

    spec: AngleMapSpec
    x_values: RealVector
    y_values: RealVector
    enhancements: RealMatrix

    def argmax(self) -> tuple[float, float]:
        row, column = np.unravel_index(np.argmax(self.enhancements), self.enhancements.shape)
        return float(self.x_values[column]), float(self.y_values[row])

    def __repr_data__(self) -> dict:
        return {
            "grid": self.enhancements.shape,
            "max": float(self.enhancements.max()),
            "min": float(self.enhancements.min()),
        }


def dnp_angle_map(
    spec: AngleMapSpec,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    threads: Optional[int] = None,
    frame: Optional[Frame] = None,
) -> AngleMapResult:
    """Asymptotic enhancement of repeated ideal rotations over a 2-D slice.

    Raises:
        ConfigError: The slice is invalid.
    """
    if problems := spec.check():
        raise ConfigError(problems)

    frame = frame or eigenframe(drift_hamiltonian(system))
    delay = relaxation.default_time_step() if spec.delay is None else spec.delay
    include = configured_channels(relaxation)
    cells = [(x, y) for y in spec.y_values for x in spec.x_values]

    def evaluate(cell: tuple[float, float]) -> float:
        angles = spec.angles_at(*cell)
        value = asymptotic_enhancement(
            angles, system, relaxation, delay=delay, include=include, frame=frame
        )
        Logger.debug(f"angles {angles}: enhancement {value:.6g}")
        return value

    with ThreadPoolExecutor(max_workers=threads) as executor:
        values = list(executor.map(evaluate, cells))

    result = AngleMapResult(
        spec,
        spec.x_values,
        spec.y_values,
        np.array(values).reshape(spec.grid, spec.grid),
    )
    Logger.info(f"angle map {spec!r}: {result!r}")

    return result
