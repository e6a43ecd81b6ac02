from typing import Callable

import numpy as np
import pytest

from dnp_control.channels import KrausSet
from dnp_control.dnp import RelaxationParams
from dnp_control.quantum import (
    DensityMatrix,
    Frame,
    SpinSystemParams,
    drift_hamiltonian,
    eigenframe,
)


@pytest.fixture
def params() -> SpinSystemParams:
    return SpinSystemParams()


@pytest.fixture
def relaxation() -> RelaxationParams:
    return RelaxationParams()


@pytest.fixture
def frame(params: SpinSystemParams) -> Frame:
    return eigenframe(drift_hamiltonian(params))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240517)


@pytest.fixture
def random_state(rng: np.random.Generator) -> Callable[[int], DensityMatrix]:
    def make(dim: int = 4) -> DensityMatrix:
        ginibre = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        matrix = ginibre @ ginibre.conj().T
        return DensityMatrix.from_matrix(matrix / np.trace(matrix))

    return make


@pytest.fixture
def random_unitary(rng: np.random.Generator) -> Callable[[int], np.ndarray]:
    def make(dim: int = 4) -> np.ndarray:
        ginibre = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, r = np.linalg.qr(ginibre)
        return q * (np.diag(r) / np.abs(np.diag(r)))

    return make


@pytest.fixture
def random_channel(
    rng: np.random.Generator,
) -> Callable[[int, int], KrausSet]:
    def make(dim: int = 4, rank: int = 3) -> KrausSet:
        # Stinespring: rows of a random isometry cut into Kraus blocks
        ginibre = rng.normal(size=(dim * rank, dim)) + 1j * rng.normal(
            size=(dim * rank, dim)
        )
        isometry, _ = np.linalg.qr(ginibre)
        return KrausSet.create(list(isometry.reshape(rank, dim, dim)))

    return make
