from dataclasses import dataclass, replace
from math import isfinite
from typing import Optional

from dnp_control.quantum import SpinSystemParams
from dnp_control.util import ConfigError, MissingParameterError, ReprInfo, SerializableData


@dataclass(frozen=True)
class RelaxationParams(SerializableData, ReprInfo):
    """Relaxation times in seconds.

    `Tdq` absent disables double quantum relaxation. `temperature` overrides
    the spin system temperature for the relaxation targets when set.
    """

    T1e: float = 1e-3
    Tzq: float = 0.1
    Tdq: Optional[float] = None
    temperature: Optional[float] = None

    @classmethod
    def create(
        cls,
        T1e: float = 1e-3,
        Tzq: float = 0.1,
        Tdq: Optional[float] = None,
        temperature: Optional[float] = None,
    ) -> "RelaxationParams":
        params = cls(T1e, Tzq, Tdq, temperature)

        if problems := params.check():
            raise ConfigError(problems)

        return params

    def check(self) -> list[str]:
        problems = []

        for name in ("T1e", "Tzq", "Tdq", "temperature"):
            value = getattr(self, name)
            if value is not None and (not isfinite(value) or value <= 0):
                problems.append(f"relaxation.{name}: must be finite and > 0, got {value}")

        return problems

    def with_tdq_ratio(self, ratio: float) -> "RelaxationParams":
        """Copy with T_dq = ratio·T_zq."""
        return replace(self, Tdq=ratio * self.Tzq)

    def without_tdq(self) -> "RelaxationParams":
        return replace(self, Tdq=None)

    def require_tdq(self) -> float:
        if self.Tdq is None:
            raise MissingParameterError("double quantum relaxation needs relaxation.Tdq")

        return self.Tdq

    def temperature_for(self, system: SpinSystemParams) -> float:
        return self.temperature if self.temperature is not None else system.temperature

    @property
    def shortest_time(self) -> float:
        return min(value for value in (self.T1e, self.Tzq, self.Tdq) if value is not None)

    def default_time_step(self) -> float:
        return min(self.T1e, self.Tzq) / 100

    def __repr_data__(self) -> dict:
        return {"T1e": self.T1e, "Tzq": self.Tzq, "Tdq": self.Tdq}
