from math import atan2, cos, pi, sqrt, tanh

import numpy as np
import pytest
from scipy.constants import Boltzmann, Planck
from scipy.linalg import expm

from dnp_control.quantum import (
    PAULI_LABELS,
    DensityMatrix,
    DnpMechanism,
    ReferenceFrame,
    SpinSystemParams,
    Subsystem,
    Transition,
    control_hamiltonian,
    drift_hamiltonian,
    eigenframe,
    equilibrium_state,
    partial_trace,
    pauli_decompose,
    pauli_product,
    pauli_reconstruct,
    polarization,
    propagator,
    spin_operators,
    thermal_state,
)
from dnp_control.util import ConfigError, NumericalError


def _commutator(a, b):
    return a @ b - b @ a


def test_spin_operator_algebra():
    ops = spin_operators()

    assert np.trace(ops["Sz"] @ ops["Sz"]).real == pytest.approx(1.0)
    assert np.abs(_commutator(ops["Sx"], ops["Sy"]) - 1j * ops["Sz"]).max() < 1e-14
    assert np.abs(_commutator(ops["Ix"], ops["Iy"]) - 1j * ops["Iz"]).max() < 1e-14
    assert np.abs(_commutator(ops["Sz"], ops["Ix"])).max() == 0
    assert ops["x"].shape == (2, 2)


def test_spin_operators_are_read_only():
    with pytest.raises(ValueError):
        spin_operators()["Sz"][0, 0] = 3


def test_drift_is_hermitian_in_both_frames(params):
    for frame in ReferenceFrame:
        hamiltonian = drift_hamiltonian(params, frame)
        assert np.abs(hamiltonian - hamiltonian.conj().T).max() < 1e-12


def test_uncoupled_drift_has_zeeman_ladder():
    params = SpinSystemParams(A=0.0, B=0.0)
    frame = eigenframe(drift_hamiltonian(params, ReferenceFrame.LAB))

    expected = sorted(
        2 * pi * (s * params.omega_S + i * params.omega_I) / 2
        for s in (1, -1)
        for i in (1, -1)
    )
    assert np.allclose(frame.eigenvalues, expected, rtol=1e-12)
    assert np.abs(np.abs(frame.vectors) - np.abs(frame.vectors).round()).max() < 1e-12


def test_drift_rejects_non_finite():
    with pytest.raises(ConfigError):
        drift_hamiltonian(SpinSystemParams(A=float("nan")))


def test_manifold_gaps_match_closed_form(params, frame):
    up_gap, down_gap = frame.manifold_gaps()

    assert up_gap == pytest.approx(
        sqrt((params.omega_I + params.A / 2) ** 2 + (params.B / 2) ** 2), rel=1e-9
    )
    assert down_gap == pytest.approx(
        sqrt((params.omega_I - params.A / 2) ** 2 + (params.B / 2) ** 2), rel=1e-9
    )


def test_dressed_levels_follow_manifold_mixing_angle(params, frame):
    basis = frame.dressed_basis
    weights = np.abs(basis) ** 2

    # electron character stays pure, only nuclear states mix
    assert weights[2:, :2].max() < 1e-20
    assert weights[:2, 2:].max() < 1e-20

    for column, sign in ((0, 1), (2, -1)):
        z_field = params.omega_I + sign * params.A / 2
        theta = atan2(params.B / 2, z_field)
        expected = (1 + abs(cos(theta))) / 2
        alpha_row = 0 if column == 0 else 2
        assert weights[alpha_row, column] == pytest.approx(expected, rel=1e-10)


def test_eigenframe_reconstructs_hamiltonian(frame, params):
    hamiltonian = drift_hamiltonian(params)
    rebuilt = frame.vectors @ np.diag(frame.eigenvalues) @ frame.vectors.conj().T

    assert np.abs(rebuilt - hamiltonian).max() < 1e-10 * np.abs(hamiltonian).max()
    assert np.all(np.diff(frame.eigenvalues) >= 0)


def test_eigenframe_is_deterministic_on_degenerate_input():
    assert np.array_equal(eigenframe(np.zeros((4, 4))).vectors, np.eye(4))

    frame = eigenframe(spin_operators()["Sz"])
    expected = np.eye(4)[:, [2, 3, 0, 1]]
    assert np.abs(frame.vectors - expected).max() < 1e-12
    assert frame.product_order == (2, 3, 0, 1)


def test_eigenframe_phase_convention(frame):
    for column in frame.vectors.T:
        pivot = column[np.argmax(np.abs(column))]
        assert pivot.imag == 0
        assert pivot.real > 0


def test_eigenframe_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eigenframe(np.array([[0, 1], [0, 0]]))


def test_transition_levels_put_upper_state_first():
    assert Transition.ZERO_QUANTUM.levels == (1, 2)
    assert Transition.DOUBLE_QUANTUM.levels == (0, 3)
    assert Transition(1).levels == (0, 2)


def test_control_hamiltonians():
    assert np.abs(control_hamiltonian(DnpMechanism.OE, 0.0)).max() == 0

    drive = control_hamiltonian(DnpMechanism.OE, 8e6)
    assert np.linalg.norm(drive) == pytest.approx(
        2 * pi * 8e6 * np.linalg.norm(spin_operators()["Sx"])
    )

    flip_flop = control_hamiltonian(DnpMechanism.SE, 8e6)
    mask = np.ones((4, 4), dtype=bool)
    mask[1, 2] = mask[2, 1] = False
    assert np.abs(flip_flop[mask]).max() == 0
    assert abs(flip_flop[1, 2]) > 0

    with pytest.raises(ValueError):
        control_hamiltonian(DnpMechanism.OE, -1.0)


def test_propagator(rng):
    ginibre = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    hamiltonian = ginibre + ginibre.conj().T

    assert np.array_equal(propagator(hamiltonian, 0.0), np.eye(4))

    unitary = propagator(hamiltonian, 0.7)
    assert np.abs(unitary @ unitary.conj().T - np.eye(4)).max() < 1e-12
    assert np.abs(unitary - expm(-0.7j * hamiltonian)).max() < 1e-10

    split = propagator(hamiltonian, 0.3) @ propagator(hamiltonian, 0.4)
    assert np.abs(split - unitary).max() < 1e-10

    with pytest.raises(ValueError):
        propagator(hamiltonian, float("inf"))


def test_propagator_stays_unitary_for_large_phases(rng):
    ginibre = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    hamiltonian = ginibre + ginibre.conj().T
    dt = 1e3 / np.linalg.norm(hamiltonian, 2)

    unitary = propagator(hamiltonian, dt)
    assert np.abs(unitary.conj().T @ unitary - np.eye(4)).max() < 1e-10


def test_thermal_state_polarizations(params):
    rho = thermal_state(params)
    x = Planck * params.omega_S / (Boltzmann * params.temperature)
    y = Planck * params.omega_I / (Boltzmann * params.temperature)

    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-12)
    assert polarization(rho, Subsystem.ELECTRON) == pytest.approx(-tanh(x / 2), rel=1e-10)
    assert polarization(rho, Subsystem.NUCLEUS) == pytest.approx(-tanh(y / 2), rel=1e-8)

    ratio = polarization(rho, Subsystem.ELECTRON) / polarization(rho, Subsystem.NUCLEUS)
    assert ratio == pytest.approx(params.omega_S / params.omega_I, rel=1e-4)
    assert ratio == pytest.approx(658, abs=1)


def test_thermal_state_high_temperature_limit():
    rho = thermal_state(SpinSystemParams(temperature=1e12))
    assert np.abs(rho.matrix - np.eye(4) / 4).max() < 1e-9


def test_equilibrium_state_is_stationary_under_drift(params, frame):
    rho = equilibrium_state(params, frame).matrix
    unitary = propagator(drift_hamiltonian(params), 1e-7)

    assert np.abs(unitary @ rho @ unitary.conj().T - rho).max() < 1e-14
    assert np.allclose(
        np.diag(frame.to_dressed(rho)).real, np.diag(thermal_state(params).matrix).real
    )


def test_uncoupled_equilibrium_equals_thermal():
    params = SpinSystemParams(A=0.0, B=0.0)
    frame = eigenframe(drift_hamiltonian(params))

    assert np.abs(
        equilibrium_state(params, frame).matrix - thermal_state(params).matrix
    ).max() < 1e-15


def test_partial_trace(random_state):
    rho_e = random_state(2)
    rho_n = random_state(2)
    product = np.kron(rho_e.matrix, rho_n.matrix)

    assert np.abs(partial_trace(product, Subsystem.NUCLEUS).matrix - rho_n.matrix).max() < 1e-15
    assert np.abs(partial_trace(product, Subsystem.ELECTRON).matrix - rho_e.matrix).max() < 1e-15

    bell = np.zeros(4)
    bell[[0, 3]] = 1 / sqrt(2)
    reduced = partial_trace(np.outer(bell, bell), Subsystem.NUCLEUS)
    assert np.abs(reduced.matrix - np.eye(2) / 2).max() < 1e-15

    for _ in range(10):
        reduced = partial_trace(random_state(4), Subsystem.NUCLEUS)
        assert np.trace(reduced.matrix).real == pytest.approx(1.0, abs=1e-12)


def test_partial_trace_rejects_single_spin(random_state):
    with pytest.raises(ValueError):
        partial_trace(random_state(2), Subsystem.NUCLEUS)


def test_pauli_decomposition():
    mixed = pauli_decompose(np.eye(4) / 4)
    assert mixed["II"] == pytest.approx(0.25)
    assert all(abs(mixed[label]) < 1e-15 for label in PAULI_LABELS[1:])

    electron_z = pauli_decompose(pauli_product("ZI"))
    assert electron_z["ZI"] == pytest.approx(1.0)
    assert sum(abs(value) for value in electron_z.values()) == pytest.approx(1.0)

    assert PAULI_LABELS[:5] == ("II", "IX", "IY", "IZ", "XI")


def test_pauli_decomposition_is_isometric(rng):
    op = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    coefficients = pauli_decompose(op)

    norm = 4 * sum(abs(value) ** 2 for value in coefficients.values())
    assert norm == pytest.approx(np.linalg.norm(op) ** 2, rel=1e-10)
    assert np.abs(pauli_reconstruct(coefficients) - op).max() < 1e-12


def test_density_matrix_validation():
    with pytest.raises(NumericalError):
        DensityMatrix.from_matrix(np.diag([1.5, -0.5]))

    with pytest.raises(ValueError):
        DensityMatrix.from_matrix(np.eye(3) / 3)


def test_low_secular_ratio_still_creates():
    params = SpinSystemParams.create(omega_S=1e8, omega_I=2e6)
    assert params.secular_ratio == pytest.approx(50)


def test_create_reports_every_problem():
    with pytest.raises(ConfigError) as error:
        SpinSystemParams.create(omega_S=-1.0, temperature=0.0)

    assert len(error.value.errors) == 2
