"""Supermatrix and Choi representations of channels.

Vectorization stacks columns everywhere: vec(ρ)[k + d·l] = ρ[k, l], so
vec(AρB) = (Bᵀ ⊗ A)·vec(ρ) and a Kraus set maps to S = Σ conj(M) ⊗ M.
The Choi matrix is the unnormalized Σ_ij E_ij ⊗ Λ(E_ij), trace d.
"""

from dataclasses import dataclass
from math import isqrt

import numpy as np
import numpy.typing as npt
from scipy.linalg import eigh

from dnp_control.channels.kraus import KrausSet
from dnp_control.quantum import DensityMatrix
from dnp_control.util import DimensionError, NumericalError, ReprInfo
from dnp_control.util.types import (
    CPTP_TOL,
    ComplexMatrix,
    ComplexVector,
    as_complex_matrix,
    dagger,
)

DEFAULT_RANK_TOL = 1e-10


def vec(matrix: npt.ArrayLike) -> ComplexVector:
    return np.asarray(matrix, dtype=np.complex128).reshape(-1, order="F")


def unvec(vector: npt.ArrayLike) -> ComplexMatrix:
    vector = np.asarray(vector, dtype=np.complex128)
    dim = isqrt(vector.size)

    if dim * dim != vector.size:
        raise DimensionError(f"cannot unvectorize a vector of length {vector.size}")

    return vector.reshape(dim, dim, order="F")


def _operator_dim(matrix: ComplexMatrix) -> int:
    dim = isqrt(matrix.shape[0])

    if matrix.shape != (dim * dim, dim * dim):
        raise DimensionError(f"expected a d²×d² matrix, got {matrix.shape}")

    return dim


@dataclass(frozen=True, eq=False)
class SuperMatrix(ReprInfo):
    """Linear map on column-stacked density matrices."""

    matrix: ComplexMatrix

    @classmethod
    def create(cls, matrix: npt.ArrayLike) -> "SuperMatrix":
        supermatrix = cls(as_complex_matrix(matrix))
        _operator_dim(supermatrix.matrix)
        return supermatrix

    @classmethod
    def identity(cls, dim: int = 4) -> "SuperMatrix":
        return cls(np.eye(dim * dim, dtype=np.complex128))

    @property
    def dim(self) -> int:
        """Dimension of the Hilbert space the map acts on."""
        return _operator_dim(self.matrix)

    def apply(self, rho: DensityMatrix | npt.ArrayLike) -> DensityMatrix:
        matrix = rho.matrix if isinstance(rho, DensityMatrix) else as_complex_matrix(rho)

        if matrix.shape[0] != self.dim:
            raise DimensionError(
                f"state of dim {matrix.shape[0]} for a map on dim {self.dim}"
            )

        return DensityMatrix.from_matrix(unvec(self.matrix @ vec(matrix)), check=False)

    def then(self, other: "SuperMatrix") -> "SuperMatrix":
        """Map applying `self` first and `other` second."""
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} and {other.dim}")

        return SuperMatrix(other.matrix @ self.matrix)

    def power(self, exponent: int) -> "SuperMatrix":
        return SuperMatrix(np.linalg.matrix_power(self.matrix, exponent))

    def trace_deviation(self) -> float:
        """Largest violation of ⟨⟨𝟙|S = ⟨⟨𝟙|."""
        identity_row = vec(np.eye(self.dim))
        return float(np.max(np.abs(identity_row @ self.matrix - identity_row)))

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.matrix))))

    def __repr_data__(self) -> dict:
        return {"dim": self.dim}


@dataclass(frozen=True, eq=False)
class ChoiMatrix(ReprInfo):
    matrix: ComplexMatrix

    @classmethod
    def create(cls, matrix: npt.ArrayLike) -> "ChoiMatrix":
        choi = cls(as_complex_matrix(matrix))
        _operator_dim(choi.matrix)
        return choi

    @property
    def dim(self) -> int:
        return _operator_dim(self.matrix)

    def output_trace(self) -> ComplexMatrix:
        """Partial trace over the output factor, 𝟙 for trace preserving maps."""
        dim = self.dim
        return np.einsum("ikjk->ij", self.matrix.reshape(dim, dim, dim, dim))

    def eigenvalues(self) -> npt.NDArray[np.float64]:
        return np.linalg.eigvalsh((self.matrix + dagger(self.matrix)) / 2)

    def __repr_data__(self) -> dict:
        return {"dim": self.dim}


def reshuffle(matrix: npt.ArrayLike) -> ComplexMatrix:
    """Index reshuffle between supermatrix and Choi matrix.

    C[i·d+k, j·d+l] = S[k+d·l, i+d·j]; the reshuffle is an involution.
    """
    matrix = as_complex_matrix(matrix)
    dim = _operator_dim(matrix)

    return (
        matrix.reshape(dim, dim, dim, dim)
        .transpose(3, 1, 2, 0)
        .reshape(dim * dim, dim * dim)
    )


def kraus_to_super(kraus: KrausSet) -> SuperMatrix:
    return SuperMatrix(sum(np.kron(m.conj(), m) for m in kraus.operators))


def super_to_choi(supermatrix: SuperMatrix) -> ChoiMatrix:
    return ChoiMatrix(reshuffle(supermatrix.matrix))


def choi_to_super(choi: ChoiMatrix) -> SuperMatrix:
    return SuperMatrix(reshuffle(choi.matrix))


def kraus_to_choi(kraus: KrausSet) -> ChoiMatrix:
    columns = np.stack([m.T.reshape(-1) for m in kraus.operators], axis=1)
    return ChoiMatrix(columns @ dagger(columns))


def choi_to_kraus(
    choi: ChoiMatrix,
    rank_tol: float = DEFAULT_RANK_TOL,
    *,
    tol: float = CPTP_TOL,
) -> KrausSet:
    """Minimal Kraus set from the eigendecomposition of a Choi matrix.

    Eigenpairs above `rank_tol`·λ_max become operators √λ·unvec(v), largest
    eigenvalue first.

    Raises:
        NumericalError: An eigenvalue is below −`tol`·max(1, λ_max), the map
            is not completely positive.
    """
    dim = choi.dim
    eigenvalues, vectors = eigh((choi.matrix + dagger(choi.matrix)) / 2)
    largest = float(eigenvalues[-1])

    if eigenvalues[0] < -tol * max(1.0, largest):
        raise NumericalError(
            f"Choi matrix has eigenvalue {eigenvalues[0]:.3g}, map is not CP"
        )

    if largest <= 0:
        raise NumericalError("Choi matrix is zero, no Kraus operator to extract")

    operators = [
        np.sqrt(value) * vectors[:, index].reshape(dim, dim).T
        for index, value in reversed(list(enumerate(eigenvalues)))
        if value > rank_tol * largest
    ]

    return KrausSet(tuple(operators))


def minimal_kraus(channel: KrausSet | SuperMatrix, rank_tol: float = DEFAULT_RANK_TOL) -> KrausSet:
    """Smallest Kraus set for the same map."""
    return choi_to_kraus(super_to_choi(as_super(channel)), rank_tol)


def as_super(channel: KrausSet | SuperMatrix) -> SuperMatrix:
    return kraus_to_super(channel) if isinstance(channel, KrausSet) else channel
