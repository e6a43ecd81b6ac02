from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt
from scipy.special import softmax

from dnp_control.quantum.params import SpinSystemParams
from dnp_control.util import DimensionError, NumericalError, ReprInfo
from dnp_control.util.types import (
    HERMITIAN_TOL,
    TRACE_TOL,
    ComplexMatrix,
    RealVector,
    as_complex_matrix,
    dagger,
)

if TYPE_CHECKING:
    from dnp_control.quantum.frame import Frame

EIGENVALUE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix(ReprInfo):
    """Trace one, Hermitian, positive semidefinite state on 2 or 4 levels."""

    matrix: ComplexMatrix

    @classmethod
    def from_matrix(
        cls,
        matrix: npt.ArrayLike,
        *,
        check: bool = True,
    ) -> "DensityMatrix":
        """Wrap a matrix, validating it unless `check` is False.

        Raises:
            DimensionError: The matrix is not 2×2 or 4×4.
            NumericalError: The matrix is not a valid state.
        """
        state = cls(as_complex_matrix(matrix))

        if state.matrix.shape not in ((2, 2), (4, 4)):
            raise DimensionError(
                f"density matrix must be 2x2 or 4x4, got {state.matrix.shape}"
            )

        if check and (problems := state.check()):
            raise NumericalError("invalid density matrix: " + "; ".join(problems))

        return state

    @classmethod
    def from_unnormalized(cls, matrix: npt.ArrayLike) -> "DensityMatrix":
        """Hermitize and normalize a computed matrix to unit trace."""
        matrix = as_complex_matrix(matrix)
        matrix = (matrix + dagger(matrix)) / 2
        trace = np.trace(matrix).real

        if abs(trace) < 1e-300:
            raise NumericalError("cannot normalize a matrix with zero trace")

        return cls.from_matrix(matrix / trace, check=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def check(self) -> list[str]:
        """Return every violated state invariant."""
        problems = []
        trace = np.trace(self.matrix)

        if abs(trace - 1) > TRACE_TOL:
            problems.append(f"trace is {trace:.12g}")

        deviation = np.max(np.abs(self.matrix - dagger(self.matrix)))
        if deviation > HERMITIAN_TOL:
            problems.append(f"not Hermitian (deviation {deviation:.3g})")
        else:
            smallest = np.linalg.eigvalsh(self.matrix).min()
            if smallest < -EIGENVALUE_TOL:
                problems.append(f"negative eigenvalue {smallest:.3g}")

        return problems

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __repr_data__(self) -> dict:
        return {"dim": self.dim, "purity": self.purity()}


def maximally_mixed(dim: int = 4) -> DensityMatrix:
    return DensityMatrix.from_matrix(np.eye(dim) / dim)


def zeeman_populations(params: SpinSystemParams) -> RealVector:
    """Gibbs populations of the Zeeman levels in product order.

    Order is (↑α, ↑β, ↓α, ↓β) with ↑ = S_z = +1/2 and α = I_z = +1/2.
    """
    m_s = np.array([0.5, 0.5, -0.5, -0.5])
    m_i = np.array([0.5, -0.5, 0.5, -0.5])
    energies = params.omega_S * m_s + params.omega_I * m_i

    return softmax(-params.boltzmann_exponent(1.0) * energies)


def thermal_state(params: SpinSystemParams) -> DensityMatrix:
    """Normalized Gibbs state of the two spin Zeeman Hamiltonian."""
    return DensityMatrix.from_matrix(np.diag(zeeman_populations(params)))


def equilibrium_state(params: SpinSystemParams, frame: "Frame") -> DensityMatrix:
    """State every relaxation channel returns to.

    The Zeeman Gibbs populations are placed on the dressed drift eigenstates.
    Equals `thermal_state` when the hyperfine terms do not mix the levels.
    """
    dressed = np.diag(zeeman_populations(params)).astype(np.complex128)

    return DensityMatrix.from_matrix(frame.from_dressed(dressed), check=False)
