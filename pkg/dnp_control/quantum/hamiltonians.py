from enum import Enum
from math import isfinite, pi

import numpy as np
import numpy.typing as npt
from scipy.linalg import eigh

from dnp_control.quantum.operators import spin_operators
from dnp_control.quantum.params import SpinSystemParams
from dnp_control.util import ConfigError
from dnp_control.util.types import ComplexMatrix, as_complex_matrix, dagger, is_hermitian


class ReferenceFrame(str, Enum):
    LAB = "Lab"
    ROTATING = "Electron rotating"


class DnpMechanism(str, Enum):
    """Microwave driven polarization transfer pathway."""

    OE = "Overhauser effect"
    SE = "Solid effect"


def _relative_tol(matrix: ComplexMatrix, tol: float) -> float:
    return tol * max(1.0, float(np.max(np.abs(matrix), initial=0.0)))


def drift_hamiltonian(
    params: SpinSystemParams,
    frame: ReferenceFrame = ReferenceFrame.ROTATING,
) -> ComplexMatrix:
    """Static Hamiltonian in rad/s.

    2π(ω_S S_z + ω_I I_z + A S_z I_z + B S_z I_x); the electron rotating
    frame drops the ω_S S_z term.

    Raises:
        ConfigError: A parameter is not finite.
    """
    if problems := params.check():
        raise ConfigError(problems)

    ops = spin_operators()
    hamiltonian = (
        params.omega_I * ops["Iz"]
        + params.A * ops["Sz"] @ ops["Iz"]
        + params.B * ops["Sz"] @ ops["Ix"]
    )

    if frame == ReferenceFrame.LAB:
        hamiltonian = hamiltonian + params.omega_S * ops["Sz"]

    return 2 * pi * hamiltonian


def control_hamiltonian(kind: DnpMechanism, omega_d: float) -> ComplexMatrix:
    """Microwave drive in rad/s for a Rabi frequency `omega_d` in Hz.

    OE drives the electron, 2πω_d S_x. SE drives the zero quantum flip-flop,
    2πω_d (S_x I_x + S_y I_y).
    """
    if not isfinite(omega_d) or omega_d < 0:
        raise ValueError(f"Rabi frequency must be finite and >= 0, got {omega_d}")

    ops = spin_operators()

    match kind:
        case DnpMechanism.OE:
            drive = ops["Sx"]
        case DnpMechanism.SE:
            drive = ops["Sx"] @ ops["Ix"] + ops["Sy"] @ ops["Iy"]
        case _:
            raise ValueError(f"unknown DNP mechanism: {kind!r}")

    return 2 * pi * omega_d * drive


def propagator(hamiltonian: npt.ArrayLike, dt: float) -> ComplexMatrix:
    """exp(-iH·dt) through the Hermitian eigendecomposition of H.

    Raises:
        ValueError: H is not Hermitian, or dt is negative or not finite.
    """
    hamiltonian = as_complex_matrix(hamiltonian)

    if not isfinite(dt) or dt < 0:
        raise ValueError(f"time step must be finite and >= 0, got {dt}")

    if not is_hermitian(hamiltonian, _relative_tol(hamiltonian, 1e-10)):
        raise ValueError("propagator needs a Hermitian generator")

    if dt == 0:
        return np.eye(hamiltonian.shape[0], dtype=np.complex128)

    energies, vectors = eigh(hamiltonian)

    return (vectors * np.exp(-1j * energies * dt)) @ dagger(vectors)
