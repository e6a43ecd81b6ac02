from enum import Enum
from functools import lru_cache
from itertools import product
from types import MappingProxyType
from typing import Mapping

import numpy as np
import numpy.typing as npt

from dnp_control.quantum.states import DensityMatrix
from dnp_control.util import DimensionError, EnumExtend
from dnp_control.util.types import ComplexMatrix, as_complex_matrix, dagger

PAULI: Mapping[str, ComplexMatrix] = MappingProxyType(
    {
        "I": np.eye(2, dtype=np.complex128),
        "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
        "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    }
)

# Electron factor first: "XZ" is σ_x ⊗ σ_z.
PAULI_LABELS: tuple[str, ...] = tuple(a + b for a, b in product("IXYZ", repeat=2))


class Subsystem(EnumExtend[int], str, Enum):
    ELECTRON = "Electron"
    NUCLEUS = "Nucleus"

    @classmethod
    def _get_value_map(cls) -> dict["Subsystem", int]:
        # Position of the factor in electron ⊗ nucleus
        return {
            Subsystem.ELECTRON: 0,
            Subsystem.NUCLEUS: 1,
        }


def _frozen(matrix: npt.NDArray) -> ComplexMatrix:
    matrix = matrix.astype(np.complex128)
    matrix.setflags(write=False)
    return matrix


@lru_cache(maxsize=None)
def spin_operators() -> Mapping[str, ComplexMatrix]:
    """Spin-½ operators of the electron-nucleus pair.

    Keys ``Sx, Sy, Sz`` are σ/2 ⊗ 𝟙, ``Ix, Iy, Iz`` are 𝟙 ⊗ σ/2 and
    ``x, y, z`` are the bare 2×2 single spin operators. Arrays are read only.
    """
    operators = {}

    for axis in "xyz":
        single = PAULI[axis.upper()] / 2
        operators[axis] = _frozen(single)
        operators[f"S{axis}"] = _frozen(np.kron(single, PAULI["I"]))
        operators[f"I{axis}"] = _frozen(np.kron(PAULI["I"], single))

    return MappingProxyType(operators)


def pauli_product(label: str) -> ComplexMatrix:
    """Unnormalized two spin Pauli product, e.g. ``"ZI"`` = σ_z ⊗ 𝟙."""
    if len(label) != 2 or any(char not in PAULI for char in label):
        raise ValueError(f"unknown Pauli label {label!r}")

    return np.kron(PAULI[label[0]], PAULI[label[1]])


def pauli_decompose(op: npt.ArrayLike) -> dict[str, complex]:
    """Coefficients of a 4×4 operator over σ_a ⊗ σ_b.

    c_ab = Tr((σ_a⊗σ_b)† op)/4, so a trace one state has c_II = 0.25.
    Keys follow `PAULI_LABELS` order.
    """
    op = as_complex_matrix(op)

    if op.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 operator, got {op.shape}")

    return {
        label: complex(np.trace(dagger(pauli_product(label)) @ op) / 4)
        for label in PAULI_LABELS
    }


def pauli_reconstruct(coefficients: Mapping[str, complex]) -> ComplexMatrix:
    """Inverse of `pauli_decompose`; missing labels count as zero."""
    op = np.zeros((4, 4), dtype=np.complex128)

    for label, value in coefficients.items():
        op += value * pauli_product(label)

    return op


def partial_trace_matrix(matrix: npt.ArrayLike, keep: Subsystem) -> ComplexMatrix:
    """Trace out the other factor of any 4×4 operator."""
    matrix = as_complex_matrix(matrix)

    if matrix.shape != (4, 4):
        raise DimensionError(f"partial trace needs a 4x4 operator, got {matrix.shape}")

    blocks = matrix.reshape(2, 2, 2, 2)

    if keep == Subsystem.ELECTRON:
        return np.einsum("ijkj->ik", blocks)

    return np.einsum("ijil->jl", blocks)


def partial_trace(
    rho: DensityMatrix | npt.ArrayLike,
    subsystem: Subsystem,
) -> DensityMatrix:
    """Reduced state on the kept `subsystem`.

    Raises:
        DimensionError: `rho` is not a two spin state.
    """
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else rho

    return DensityMatrix.from_matrix(
        partial_trace_matrix(matrix, subsystem), check=False
    )


def polarization(rho: DensityMatrix | npt.ArrayLike, subsystem: Subsystem) -> float:
    """⟨2S_z⟩ or ⟨2I_z⟩ of a two spin state."""
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else as_complex_matrix(rho)
    key = "Sz" if subsystem == Subsystem.ELECTRON else "Iz"

    return float(2 * np.real(np.trace(spin_operators()[key] @ matrix)))
