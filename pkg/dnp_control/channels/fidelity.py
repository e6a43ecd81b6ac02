"""Overlaps between channels and target operations."""

from functools import lru_cache
from itertools import product

import numpy as np
import numpy.typing as npt

from dnp_control.channels.kraus import KrausSet
from dnp_control.channels.representations import SuperMatrix, as_super, unvec, vec
from dnp_control.quantum import PAULI
from dnp_control.util import DimensionError
from dnp_control.util.types import ComplexMatrix, RealMatrix, as_complex_matrix, dagger, is_unitary


def gate_fidelity(target: npt.ArrayLike, kraus: KrausSet) -> float:
    """Σ_k |Tr(U†M_k)|² / d², equal to 1 exactly when the channel is U.

    Raises:
        DimensionError: The sizes differ.
        ValueError: `target` is not unitary.
    """
    target = as_complex_matrix(target)

    if target.shape[0] != kraus.dim:
        raise DimensionError(f"target is {target.shape}, channel acts on dim {kraus.dim}")

    if not is_unitary(target):
        raise ValueError("gate fidelity needs a unitary target")

    overlaps = [abs(np.trace(dagger(target) @ m)) ** 2 for m in kraus.operators]
    return float(sum(overlaps) / kraus.dim**2)


@lru_cache(maxsize=None)
def _pauli_basis(dim: int) -> tuple[ComplexMatrix, ...]:
    qubits = {2: 1, 4: 2}.get(dim)

    if qubits is None:
        raise DimensionError(f"Pauli basis exists for 1 or 2 spins, got dim {dim}")

    basis = []
    for labels in product("IXYZ", repeat=qubits):
        operator = np.eye(1, dtype=np.complex128)
        for label in labels:
            operator = np.kron(operator, PAULI[label])
        basis.append(operator)

    return tuple(basis)


def pauli_transfer_matrix(channel: KrausSet | SuperMatrix) -> RealMatrix:
    """R_ij = Tr(P_i Λ(P_j))/d over unnormalized Pauli products."""
    supermatrix = as_super(channel)
    basis = _pauli_basis(supermatrix.dim)
    images = [unvec(supermatrix.matrix @ vec(p)) for p in basis]

    return np.array(
        [[np.trace(p @ image).real for image in images] for p in basis]
    ) / supermatrix.dim


def map_fidelity(a: KrausSet | SuperMatrix, b: KrausSet | SuperMatrix) -> float:
    """Similarity of two maps with their completely depolarizing part removed.

    F = ⟨v_a, v_b⟩ / max(|v_a|², |v_b|²) on the transfer matrices minus the
    depolarizing one, clipped to [0, 1]. Identical maps give 1 and a
    polarizing map compared with a weaker copy gives the strength ratio.
    """
    depolarizing = np.zeros((as_super(a).dim ** 2,) * 2)
    depolarizing[0, 0] = 1.0

    v_a = (pauli_transfer_matrix(a) - depolarizing).ravel()
    v_b = (pauli_transfer_matrix(b) - depolarizing).ravel()
    scale = max(v_a @ v_a, v_b @ v_b)

    if scale == 0:
        return 1.0

    return float(np.clip(v_a @ v_b / scale, 0.0, 1.0))


def polarizing_strength(channel: KrausSet | SuperMatrix) -> float:
    """p in Λ(𝟙) = 𝟙 + p·Z for a single spin map."""
    supermatrix = as_super(channel)

    if supermatrix.dim != 2:
        raise DimensionError("polarizing strength is defined for single spin maps")

    image = unvec(supermatrix.matrix @ vec(np.eye(2)))
    return float(np.trace(PAULI["Z"] @ image).real / 2)
