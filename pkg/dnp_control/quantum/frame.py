from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from math import pi

import numpy as np
import numpy.typing as npt
from scipy.linalg import eigh

from dnp_control.util import DimensionError, ReprInfo
from dnp_control.util.types import (
    ComplexMatrix,
    RealVector,
    as_complex_matrix,
    dagger,
    is_hermitian,
)

DEGENERACY_TOL = 1e-9


class Transition(IntEnum):
    """Allowed and forbidden transitions, numbered as in the energy diagram.

    Levels are dressed indices (↑α̃=0, ↑β̃=1, ↓α̃=2, ↓β̃=3), upper level first.
    """

    ELECTRON_ALPHA = 1
    ELECTRON_BETA = 2
    ZERO_QUANTUM = 3
    DOUBLE_QUANTUM = 4

    @property
    def levels(self) -> tuple[int, int]:
        return _TRANSITION_LEVELS[self]


_TRANSITION_LEVELS = {
    Transition.ELECTRON_ALPHA: (0, 2),
    Transition.ELECTRON_BETA: (1, 3),
    Transition.ZERO_QUANTUM: (1, 2),
    Transition.DOUBLE_QUANTUM: (0, 3),
}


@dataclass(frozen=True, eq=False)
class Frame(ReprInfo):
    """Eigenbasis of a drift Hamiltonian.

    `vectors` holds the eigenvectors as columns in ascending `eigenvalues`
    order (units of the Hamiltonian, rad/s for the builders in this package).
    The dressed basis reorders them to mirror the product basis
    (↑α̃, ↑β̃, ↓α̃, ↓β̃) by dominant spin character.
    """

    vectors: ComplexMatrix
    eigenvalues: RealVector

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def frequencies(self) -> RealVector:
        """Eigenvalues in Hz."""
        return self.eigenvalues / (2 * pi)

    @cached_property
    def product_order(self) -> tuple[int, ...]:
        """Eigenvector index of each dressed level ↑α̃, ↑β̃, ↓α̃, ↓β̃."""
        if self.dim != 4:
            raise DimensionError("dressed labelling needs a two spin frame")

        weights = np.abs(self.vectors) ** 2
        electron_up = weights[0] + weights[1]
        nuclear_alpha = weights[0] + weights[2]

        # stable sort keeps ascending eigenvalue order on exact ties
        by_electron = np.argsort(-electron_up, kind="stable")
        order = []

        for manifold in (by_electron[:2], by_electron[2:]):
            ranked = sorted(manifold, key=lambda index: -nuclear_alpha[index])
            order.extend(int(index) for index in ranked)

        return tuple(order)

    @cached_property
    def dressed_basis(self) -> ComplexMatrix:
        """W with dressed levels as columns, ρ̃ = W†ρW."""
        basis = self.vectors[:, list(self.product_order)]
        basis.setflags(write=False)
        return basis

    @property
    def dressed_energies(self) -> RealVector:
        return self.eigenvalues[list(self.product_order)]

    def manifold_gaps(self) -> tuple[float, float]:
        """Nuclear splittings |E(α̃) − E(β̃)| in the ↑ and ↓ manifolds, Hz."""
        energies = self.dressed_energies / (2 * pi)
        return abs(energies[0] - energies[1]), abs(energies[2] - energies[3])

    def to_dressed(self, matrix: npt.ArrayLike) -> ComplexMatrix:
        basis = self.dressed_basis
        return dagger(basis) @ as_complex_matrix(matrix) @ basis

    def from_dressed(self, matrix: npt.ArrayLike) -> ComplexMatrix:
        basis = self.dressed_basis
        return basis @ as_complex_matrix(matrix) @ dagger(basis)

    def dress_super(self, supermatrix: npt.ArrayLike) -> ComplexMatrix:
        """Express a column-stacked supermatrix in the dressed basis."""
        basis = self.dressed_basis
        forward = np.kron(basis.T, dagger(basis))
        backward = np.kron(basis.conj(), basis)
        return forward @ as_complex_matrix(supermatrix) @ backward

    def __repr_data__(self) -> dict:
        return {"dim": self.dim, "frequencies": np.round(self.frequencies, 3).tolist()}


def _canonical_subspace_basis(vectors: ComplexMatrix) -> ComplexMatrix:
    # Gram-Schmidt on the projected computational basis vectors: the basis of
    # a degenerate eigenspace is independent of the eigensolver.
    projector = vectors @ dagger(vectors)
    chosen: list[ComplexMatrix] = []

    for column in projector.T:
        candidate = column.copy()
        for vector in chosen:
            candidate -= (vector.conj() @ candidate) * vector

        norm = np.linalg.norm(candidate)
        if norm > 1e-8:
            chosen.append(candidate / norm)

        if len(chosen) == vectors.shape[1]:
            break

    return np.stack(chosen, axis=1)


def _fix_phases(vectors: ComplexMatrix) -> ComplexMatrix:
    # Largest entry of every column becomes real and positive; the first of
    # several equal-magnitude entries wins.
    magnitudes = np.round(np.abs(vectors), 12)
    pivots = np.argmax(magnitudes, axis=0)
    pivot_values = vectors[pivots, np.arange(vectors.shape[1])]
    return vectors * (np.abs(pivot_values) / pivot_values)


def eigenframe(hamiltonian: npt.ArrayLike, tol: float = 1e-10) -> Frame:
    """Deterministic eigendecomposition H = V·diag(λ)·V†.

    Eigenvalues ascend. Inside a degenerate group the basis is canonical:
    projected computational basis vectors in index order.

    Raises:
        ValueError: H is not Hermitian within `tol` (relative to its size).
    """
    hamiltonian = as_complex_matrix(hamiltonian)
    scale = max(1.0, float(np.max(np.abs(hamiltonian), initial=0.0)))

    if not is_hermitian(hamiltonian, tol * scale):
        raise ValueError("eigenframe needs a Hermitian matrix")

    eigenvalues, vectors = eigh(hamiltonian)
    vectors = vectors.astype(np.complex128)

    start = 0
    while start < len(eigenvalues):
        stop = start + 1
        while (
            stop < len(eigenvalues)
            and eigenvalues[stop] - eigenvalues[start] <= DEGENERACY_TOL * scale
        ):
            stop += 1

        if stop - start > 1:
            vectors[:, start:stop] = _canonical_subspace_basis(vectors[:, start:stop])

        start = stop

    vectors = _fix_phases(vectors)
    vectors.setflags(write=False)

    return Frame(vectors=vectors, eigenvalues=eigenvalues)
