from dataclasses import dataclass
from math import isfinite, tanh
from typing import Optional

import numpy as np

from dnp_control.channels import KrausSet, SuperMatrix, polarizing_strength
from dnp_control.quantum import (
    DensityMatrix,
    Frame,
    SpinSystemParams,
    Subsystem,
    partial_trace,
    polarization,
)
from dnp_control.util import DimensionError, Logger, NumericalError, ReprInfo

# Relative slack on the ω_S/ω_I bound before a value is flagged.
CAP_SLACK = 1e-6


@dataclass(frozen=True)
class EnhancementMetrics(ReprInfo):
    nuclear_polarization: float
    enhancement: float
    polarizing_strength: Optional[float] = None
    exceeds_cap: bool = False

    def __repr_data__(self) -> dict:
        return {
            "P_n": self.nuclear_polarization,
            "enhancement": self.enhancement,
            "p": self.polarizing_strength,
        }


def thermal_nuclear_polarization(system: SpinSystemParams) -> float:
    """|⟨2I_z⟩| of the nucleus at thermal equilibrium, tanh(hω_I/2k_BT)."""
    return tanh(system.boltzmann_exponent(system.omega_I) / 2)


def nuclear_state(rho: DensityMatrix, frame: Optional[Frame] = None) -> DensityMatrix:
    """Nuclear reduced state, read in the dressed basis when a frame is given."""
    if rho.dim == 2:
        return rho

    if frame is None:
        return partial_trace(rho, Subsystem.NUCLEUS)

    dressed = DensityMatrix.from_matrix(frame.to_dressed(rho.matrix), check=False)
    return partial_trace(dressed, Subsystem.NUCLEUS)


def enhancement(
    rho_n: DensityMatrix,
    system: SpinSystemParams,
    channel: Optional[KrausSet | SuperMatrix] = None,
) -> EnhancementMetrics:
    """Nuclear polarization relative to the thermal magnitude.

    Positive values point along +I_z, the direction the Overhauser pathway
    drives. The thermal nucleus of this Hamiltonian therefore reads −1, not
    +1: the sign follows the pumping direction, not the thermal state.
    Magnitudes are unaffected. `channel`, a reduced nuclear map, adds its
    polarizing strength.

    Raises:
        DimensionError: `rho_n` is not a single spin state.
        NumericalError: The thermal reference polarization vanishes.
    """
    if rho_n.dim != 2:
        raise DimensionError(f"enhancement needs a nuclear state, got dim {rho_n.dim}")

    reference = thermal_nuclear_polarization(system)
    if not isfinite(reference) or reference <= 0:
        raise NumericalError(f"thermal nuclear polarization is {reference}, cannot normalize")

    nuclear = float(np.real(np.trace(rho_n.matrix @ np.diag([1.0, -1.0]))))
    value = nuclear / reference

    exceeds_cap = abs(value) > system.enhancement_cap * (1 + CAP_SLACK)
    if exceeds_cap:
        Logger.warning(
            f"enhancement {value:.6g} exceeds the omega_S/omega_I bound "
            + f"{system.enhancement_cap:.6g}"
        )

    return EnhancementMetrics(
        nuclear_polarization=nuclear,
        enhancement=value,
        polarizing_strength=None if channel is None else polarizing_strength(channel),
        exceeds_cap=exceeds_cap,
    )


def state_enhancement(
    rho: DensityMatrix,
    system: SpinSystemParams,
    frame: Optional[Frame] = None,
) -> EnhancementMetrics:
    """Enhancement of the nucleus in a two spin state."""
    return enhancement(nuclear_state(rho, frame), system)


def electron_polarization(rho: DensityMatrix, frame: Optional[Frame] = None) -> float:
    state = DensityMatrix.from_matrix(frame.to_dressed(rho.matrix), check=False) if frame else rho
    return polarization(state, Subsystem.ELECTRON)
