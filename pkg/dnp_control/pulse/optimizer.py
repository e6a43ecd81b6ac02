from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from math import isfinite
from typing import Optional

import numpy as np

from dnp_control.dnp import RelaxationParams
from dnp_control.pulse.nelder_mead import SimplexResult, nelder_mead
from dnp_control.pulse.objective import objective, reduced_map_fidelity
from dnp_control.pulse.pulse_map import PulseMode
from dnp_control.pulse.sequence import DEFAULT_RABI_FREQUENCY, PulseSequence
from dnp_control.quantum import Frame, SpinSystemParams, drift_hamiltonian, eigenframe
from dnp_control.util import ConfigError, Logger, ReprInfo, SerializableData

# Initial durations are drawn from [0, DURATION_BOUND/ω_d].
DURATION_BOUND = 4.0


@dataclass(frozen=True)
class OptimizerConfig(SerializableData, ReprInfo):
    """Search settings for `optimize_pulse`.

    `dt_max` caps the open mode time step, None uses min(T1e, T_zq)/100.
    """

    mode: PulseMode = PulseMode.OPEN
    n_pulses: int = 3
    max_iterations: int = 2000
    convergence_tol: float = 1e-10
    restarts: int = 8
    rng_seed: int = 0
    dt_max: Optional[float] = None
    omega_d: float = DEFAULT_RABI_FREQUENCY

    @classmethod
    def create(cls, **kwargs) -> "OptimizerConfig":
        config = cls(**kwargs)

        if problems := config.check():
            raise ConfigError(problems)

        return config

    def check(self) -> list[str]:
        problems = []

        for name in ("n_pulses", "restarts", "max_iterations"):
            if getattr(self, name) < 1:
                problems.append(f"optimize.{name}: must be >= 1, got {getattr(self, name)}")

        if self.rng_seed < 0:
            problems.append(f"optimize.rng_seed: must be >= 0, got {self.rng_seed}")

        if not isfinite(self.convergence_tol) or self.convergence_tol <= 0:
            problems.append(
                f"optimize.convergence_tol: must be finite and > 0, got {self.convergence_tol}"
            )

        if self.dt_max is not None and not self.dt_max > 0:
            problems.append(f"optimize.dt_max: must be > 0, got {self.dt_max}")

        if not isfinite(self.omega_d) or self.omega_d <= 0:
            problems.append(f"optimize.omega_d: must be finite and > 0, got {self.omega_d}")

        return problems

    @property
    def n_durations(self) -> int:
        return 2 * self.n_pulses + 1

    def __repr_data__(self) -> dict:
        return {
            "mode": self.mode.value,
            "pulses": self.n_pulses,
            "restarts": self.restarts,
            "seed": self.rng_seed,
        }


@dataclass(frozen=True)
class PulseResult(ReprInfo):
    sequence: PulseSequence
    gate_fidelity: float
    reduced_map_fidelity: float
    objective_history: tuple[float, ...]
    restart: int = 0

    def __repr_data__(self) -> dict:
        return {
            "gate_fidelity": self.gate_fidelity,
            "reduced_map_fidelity": self.reduced_map_fidelity,
            "restart": self.restart,
        }


def _run_restart(
    index: int,
    seed: np.random.SeedSequence,
    config: OptimizerConfig,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    frame: Frame,
) -> SimplexResult:
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(0, DURATION_BOUND / config.omega_d, config.n_durations)

    def cost(durations: np.ndarray) -> float:
        sequence = PulseSequence.from_durations(durations, config.omega_d)
        return objective(sequence, system, relaxation, config.mode, config.dt_max, frame)

    Logger.debug(f"restart {index} starting from {x0.tolist()}")
    result = nelder_mead(
        cost,
        x0,
        step=1 / config.omega_d,
        tol=config.convergence_tol,
        max_iterations=config.max_iterations,
    )
    Logger.debug(f"restart {index} finished at objective {result.fun:.6g}")

    return result


def optimize_pulse(
    config: OptimizerConfig,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    threads: Optional[int] = None,
    frame: Optional[Frame] = None,
) -> PulseResult:
    """Best of `config.restarts` simplex searches over segment durations.

    Restarts draw their initial points from independent children of
    `config.rng_seed` and may run on `threads` workers; the outcome does not
    depend on the worker count. Ties go to the lowest restart index.

    Raises:
        ConfigError: The configuration is invalid.
    """
    if problems := config.check():
        raise ConfigError(problems)

    frame = frame or eigenframe(drift_hamiltonian(system))
    seeds = np.random.SeedSequence(config.rng_seed).spawn(config.restarts)

    Logger.info(f"optimizing {config!r}")
    with ThreadPoolExecutor(max_workers=threads) as executor:
        results = list(
            executor.map(
                partial(
                    _run_restart,
                    config=config,
                    system=system,
                    relaxation=relaxation,
                    frame=frame,
                ),
                range(config.restarts),
                seeds,
            )
        )

    best = min(range(len(results)), key=lambda index: results[index].fun)
    sequence = PulseSequence.from_durations(results[best].x, config.omega_d)

    result = PulseResult(
        sequence=sequence,
        gate_fidelity=1 - results[best].fun,
        reduced_map_fidelity=reduced_map_fidelity(
            sequence, system, relaxation, dt_max=config.dt_max, frame=frame
        ),
        objective_history=results[best].history,
        restart=best,
    )
    Logger.info(f"best pulse {sequence.describe()}: {result!r}")

    return result
