from dataclasses import dataclass
from math import isfinite
from typing import TypeVar

from scipy.constants import Boltzmann, Planck

from dnp_control.util import ConfigError, Logger, ReprInfo, SerializableData

_SpinSystemParamsT = TypeVar("_SpinSystemParamsT", bound="SpinSystemParams")

# Below this ratio the secular (high field) approximation is questionable.
MIN_SECULAR_RATIO = 100.0


@dataclass(frozen=True)
class SpinSystemParams(SerializableData, ReprInfo):
    """Physical constants of the electron-nucleus pair.

    All frequencies are in Hz; Hamiltonian builders multiply by 2π.
    Defaults are the malonic acid radical values.
    """

    omega_S: float = 9.59e9
    omega_I: float = 14.57e6
    A: float = -42.7e6
    B: float = 14.7e6
    temperature: float = 293.0

    @classmethod
    def create(
        cls: type[_SpinSystemParamsT],
        omega_S: float = 9.59e9,
        omega_I: float = 14.57e6,
        A: float = -42.7e6,
        B: float = 14.7e6,
        temperature: float = 293.0,
    ) -> _SpinSystemParamsT:
        """Create validated parameters.

        Raises:
            ConfigError: Any value is out of range.
        """
        params = cls(omega_S, omega_I, A, B, temperature)
        params.validate()

        return params

    def check(self) -> list[str]:
        """Return every range problem, empty when the parameters are valid."""
        problems = []

        for name in ("omega_S", "omega_I", "A", "B", "temperature"):
            if not isfinite(getattr(self, name)):
                problems.append(f"system.{name}: must be finite")

        for name in ("omega_S", "omega_I", "temperature"):
            value = getattr(self, name)
            if isfinite(value) and value <= 0:
                problems.append(f"system.{name}: must be > 0, got {value}")

        return problems

    def validate(self) -> None:
        """Raise on invalid values and warn outside the secular regime."""
        if problems := self.check():
            raise ConfigError(problems)

        if self.secular_ratio < MIN_SECULAR_RATIO:
            Logger.warning(
                f"omega_S/omega_I = {self.secular_ratio:.3g} is below "
                + f"{MIN_SECULAR_RATIO:g}, high field approximation is weak"
            )

    @property
    def secular_ratio(self) -> float:
        return self.omega_S / self.omega_I

    @property
    def enhancement_cap(self) -> float:
        """Largest nuclear enhancement reachable by saturating the electron."""
        return self.secular_ratio

    def boltzmann_exponent(self, frequency: float) -> float:
        """h·f/(k_B·T) for a level gap of `frequency` Hz."""
        return Planck * frequency / (Boltzmann * self.temperature)

    def __repr_data__(self) -> dict:
        return {
            "omega_S": self.omega_S,
            "omega_I": self.omega_I,
            "A": self.A,
            "B": self.B,
            "T": self.temperature,
        }


DEFAULT_SPIN_SYSTEM = SpinSystemParams()
