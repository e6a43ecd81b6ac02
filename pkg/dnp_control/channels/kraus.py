from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
import numpy.typing as npt

from dnp_control.quantum import DensityMatrix
from dnp_control.util import DimensionError, NumericalError, ReprInfo
from dnp_control.util.types import CPTP_TOL, ComplexMatrix, as_complex_matrix, dagger


@dataclass(frozen=True, eq=False)
class KrausSet(ReprInfo):
    """Operator-sum representation ρ ↦ Σ_k M_k ρ M_k†."""

    operators: tuple[ComplexMatrix, ...]

    @classmethod
    def create(
        cls,
        operators: Sequence[npt.ArrayLike],
        *,
        tol: float = CPTP_TOL,
        check: bool = True,
    ) -> "KrausSet":
        """Build a Kraus set from square matrices of equal size.

        Raises:
            DimensionError: The operators are empty, not square or mixed in size.
            NumericalError: `check` is set and Σ M†M deviates from 𝟙 beyond `tol`.
        """
        matrices = tuple(as_complex_matrix(operator) for operator in operators)

        if not matrices:
            raise DimensionError("a Kraus set needs at least one operator")

        shape = matrices[0].shape
        if shape[0] != shape[1] or any(m.shape != shape for m in matrices):
            raise DimensionError(
                "Kraus operators must be square and of equal size, got "
                + ", ".join(str(m.shape) for m in matrices)
            )

        kraus = cls(matrices)

        if check and (deviation := kraus.completeness_deviation()) > tol:
            raise NumericalError(
                f"Kraus operators are not trace preserving (deviation {deviation:.3g})"
            )

        return kraus

    @classmethod
    def identity(cls, dim: int = 4) -> "KrausSet":
        return cls.create([np.eye(dim)])

    @classmethod
    def unitary(cls, unitary: npt.ArrayLike) -> "KrausSet":
        return cls.create([unitary])

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def __len__(self) -> int:
        return len(self.operators)

    def __iter__(self) -> Iterator[ComplexMatrix]:
        return iter(self.operators)

    def completeness(self) -> ComplexMatrix:
        return sum(dagger(m) @ m for m in self.operators)

    def completeness_deviation(self) -> float:
        """Spectral norm of Σ M†M − 𝟙."""
        return float(np.linalg.norm(self.completeness() - np.eye(self.dim), 2))

    def __repr_data__(self) -> dict:
        return {"dim": self.dim, "operators": len(self)}


def _check_same_dim(*dims: int) -> None:
    if len(set(dims)) > 1:
        raise DimensionError(f"dimension mismatch: {dims}")


def apply(kraus: KrausSet, rho: DensityMatrix | npt.ArrayLike) -> DensityMatrix:
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else as_complex_matrix(rho)
    _check_same_dim(kraus.dim, matrix.shape[0])

    result = sum(m @ matrix @ dagger(m) for m in kraus.operators)
    return DensityMatrix.from_matrix(result, check=False)


def compose(outer: KrausSet, inner: KrausSet) -> KrausSet:
    """Kraus set of `inner` followed by `outer`: all products A_k·B_l."""
    _check_same_dim(outer.dim, inner.dim)

    return KrausSet(tuple(a @ b for a in outer.operators for b in inner.operators))
