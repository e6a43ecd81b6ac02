from typing import Optional

import numpy as np
from scipy.linalg import lstsq

from dnp_control.channels.kraus import KrausSet
from dnp_control.channels.representations import (
    DEFAULT_RANK_TOL,
    SuperMatrix,
    as_super,
    minimal_kraus,
    unvec,
    vec,
)
from dnp_control.quantum import DensityMatrix, Subsystem, partial_trace_matrix
from dnp_control.util import (
    DegenerateFixedPointError,
    DimensionError,
    Logger,
)

FIXED_POINT_TOL = 1e-9


def reduce_to_nuclear(
    channel: SuperMatrix | KrausSet,
    rho_e: DensityMatrix,
) -> SuperMatrix:
    """Map ρ_n ↦ Tr_E[Λ(ρ_E ⊗ ρ_n)] on the nucleus.

    Built column by column from the basis inputs ρ_E ⊗ E_ij.

    Raises:
        DimensionError: The map is not on two spins or ρ_E is not one spin.
    """
    supermatrix = as_super(channel)

    if supermatrix.dim != 4 or rho_e.dim != 2:
        raise DimensionError(
            f"need a two spin map and an electron state, got {supermatrix.dim} and {rho_e.dim}"
        )

    reduced = np.zeros((4, 4), dtype=np.complex128)

    for column in range(4):
        # column i + 2j of the reduced map holds the image of E_ij
        basis = np.zeros(4, dtype=np.complex128)
        basis[column] = 1
        joint = np.kron(rho_e.matrix, unvec(basis))
        image = unvec(supermatrix.matrix @ vec(joint))
        reduced[:, column] = vec(partial_trace_matrix(image, Subsystem.NUCLEUS))

    return SuperMatrix(reduced)


def reduced_nuclear_kraus(
    channel: SuperMatrix | KrausSet,
    rho_e: DensityMatrix,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> KrausSet:
    """Minimal 2×2 Kraus set of the reduced nuclear map."""
    return minimal_kraus(reduce_to_nuclear(channel, rho_e), rank_tol)


def fixed_point(
    channel: SuperMatrix | KrausSet,
    tol: float = FIXED_POINT_TOL,
    reference: Optional[DensityMatrix] = None,
) -> DensityMatrix:
    """Stationary state: least squares solution of (S − 𝟙)v = 0 with Tr v = 1.

    The solve is for the deviation from `reference`, the maximally mixed
    state when omitted. A map that nearly keeps the reference then returns
    it to round-off instead of to the conditioning of S.

    Raises:
        DegenerateFixedPointError: More than one eigenvalue lies within `tol`
            of 1.
    """
    supermatrix = as_super(channel)
    dim = supermatrix.dim

    eigenvalues = np.linalg.eigvals(supermatrix.matrix)
    distance = np.abs(eigenvalues - 1)
    if np.count_nonzero(candidates := distance < tol) > 1:
        raise DegenerateFixedPointError(eigenvalues[candidates])

    if distance.min() >= tol:
        Logger.debug(
            f"closest eigenvalue to 1 is {eigenvalues[np.argmin(distance)]:.12g}, "
            + "map may not be trace preserving"
        )

    start = vec(reference.matrix if reference is not None else np.eye(dim) / dim)
    trace_row = vec(np.eye(dim))
    generator = supermatrix.matrix - np.eye(dim * dim)
    equations = np.vstack([generator, trace_row])
    rhs = np.append(-(generator @ start), 1 - trace_row @ start)

    deviation, *_ = lstsq(equations, rhs)
    residual = float(np.abs(equations @ deviation - rhs).max())
    if residual > tol:
        Logger.warning(f"fixed point equations hold only to {residual:.3g}")

    return DensityMatrix.from_unnormalized(unvec(start + deviation))
