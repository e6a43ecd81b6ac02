from typing import TypeAlias

import numpy as np
import numpy.typing as npt

ComplexMatrix: TypeAlias = npt.NDArray[np.complex128]
ComplexVector: TypeAlias = npt.NDArray[np.complex128]
RealVector: TypeAlias = npt.NDArray[np.float64]
RealMatrix: TypeAlias = npt.NDArray[np.float64]

# Four rotation angles, one per transition of the two spin system.
TransitionAngles: TypeAlias = tuple[float, float, float, float]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
CPTP_TOL = 1e-9


def as_complex_matrix(value: npt.ArrayLike) -> ComplexMatrix:
    """Copy anything array-like into a 2-D complex128 array."""
    matrix = np.array(value, dtype=np.complex128)

    if matrix.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {matrix.shape}")

    return matrix


def dagger(matrix: ComplexMatrix) -> ComplexMatrix:
    return matrix.conj().T


def is_hermitian(matrix: ComplexMatrix, tol: float = HERMITIAN_TOL) -> bool:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False

    return bool(np.max(np.abs(matrix - dagger(matrix)), initial=0.0) <= tol)


def is_unitary(matrix: ComplexMatrix, tol: float = 1e-10) -> bool:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False

    identity = np.eye(matrix.shape[0])
    return bool(np.max(np.abs(dagger(matrix) @ matrix - identity)) <= tol)
