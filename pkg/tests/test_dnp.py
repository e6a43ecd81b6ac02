from math import pi, sqrt, tanh

import numpy as np
import pytest
from scipy.constants import Boltzmann, Planck

from dnp_control.channels import (
    KrausSet,
    apply,
    fixed_point,
    kraus_to_super,
    polarizing_strength,
    unvec,
    validate_cptp,
    vec,
)
from dnp_control.dnp import (
    RelaxationKind,
    RelaxationParams,
    analytic_reduced_kraus,
    electron_polarization,
    enhancement,
    evolution_step,
    evolution_super,
    hyperfine_etas,
    ideal_dnp_map,
    numeric_reduced_map,
    reduced_map_convergence,
    relaxation_slices,
    sliced_relaxation_super,
    state_enhancement,
    t1e_channel,
    tdq_channel,
    thermal_nuclear_polarization,
    transition_angle_unitary,
    tx_channel,
)
from dnp_control.quantum import (
    DensityMatrix,
    DnpMechanism,
    Subsystem,
    control_hamiltonian,
    drift_hamiltonian,
    equilibrium_state,
    partial_trace,
    pauli_decompose,
    thermal_state,
)
from dnp_control.util import ConfigError, MissingParameterError

ALL_CHANNELS = frozenset(RelaxationKind)


@pytest.fixture
def relaxation_with_dq() -> RelaxationParams:
    return RelaxationParams().with_tdq_ratio(2.0)


def _builders():
    return (t1e_channel, tx_channel, tdq_channel)


@pytest.mark.parametrize("builder", _builders())
def test_zero_time_step_is_identity(builder, relaxation_with_dq, params, frame):
    channel = builder(0.0, relaxation_with_dq, params, frame)
    assert np.abs(kraus_to_super(channel).matrix - np.eye(16)).max() < 1e-12


@pytest.mark.parametrize("builder", _builders())
def test_channels_are_cptp_over_six_decades(builder, relaxation_with_dq, params, frame):
    for dt in np.logspace(-9, -2, 15):
        assert validate_cptp(builder(dt, relaxation_with_dq, params, frame)).passed


@pytest.mark.parametrize("builder", _builders())
def test_equilibrium_is_stationary(builder, relaxation_with_dq, params, frame):
    rho = equilibrium_state(params, frame)
    relaxed = apply(builder(3e-4, relaxation_with_dq, params, frame), rho)

    assert np.abs(relaxed.matrix - rho.matrix).max() < 1e-15


def test_long_t1e_step_reaches_boltzmann_electron(relaxation, params, frame, random_state):
    channel = t1e_channel(1e3 * relaxation.T1e, relaxation, params, frame)
    x = Planck * params.omega_S / (Boltzmann * params.temperature)

    for _ in range(5):
        relaxed = apply(channel, random_state(4))
        assert electron_polarization(relaxed, frame) == pytest.approx(-tanh(x / 2), abs=1e-9)


def test_tx_leaves_outer_levels_alone(relaxation, params, frame, random_state):
    rho = random_state(4)
    relaxed = apply(tx_channel(0.05, relaxation, params, frame), rho)

    before = np.diag(frame.to_dressed(rho.matrix)).real
    after = np.diag(frame.to_dressed(relaxed.matrix)).real
    assert after[[0, 3]] == pytest.approx(before[[0, 3]], abs=1e-14)
    assert after[1] + after[2] == pytest.approx(before[1] + before[2], abs=1e-14)


def test_tdq_needs_its_lifetime(relaxation, params, frame):
    with pytest.raises(MissingParameterError):
        tdq_channel(1e-6, relaxation, params, frame)

    with pytest.raises(MissingParameterError):
        evolution_step(np.zeros((4, 4)), 1e-6, relaxation, params, frame, ALL_CHANNELS)


def test_relaxation_params_validation():
    with pytest.raises(ConfigError) as error:
        RelaxationParams.create(T1e=-1.0, Tzq=0.0)

    assert len(error.value.errors) == 2
    assert RelaxationParams().with_tdq_ratio(2.0).Tdq == pytest.approx(0.2)


def test_unitary_only_step_conserves_purity(relaxation, params, frame, random_state):
    hamiltonian = drift_hamiltonian(params) + control_hamiltonian(DnpMechanism.OE, 8e6)
    step = evolution_step(hamiltonian, 1e-8, relaxation, params, frame, frozenset())
    rho = random_state(4)

    assert len(step) == 1
    assert apply(step, rho).purity() == pytest.approx(rho.purity(), abs=1e-10)


def test_evolution_step_is_cptp_and_matches_supermatrix(relaxation_with_dq, params, frame):
    hamiltonian = drift_hamiltonian(params) + control_hamiltonian(DnpMechanism.OE, 8e6)
    step = evolution_step(hamiltonian, 1e-9, relaxation_with_dq, params, frame, ALL_CHANNELS)
    supermatrix = evolution_super(
        hamiltonian, 1e-9, relaxation_with_dq, params, frame, ALL_CHANNELS
    )

    assert validate_cptp(step).passed
    assert np.abs(kraus_to_super(step).matrix - supermatrix.matrix).max() < 1e-12


def test_evolution_step_splitting_error_is_second_order(params, frame):
    # short lifetimes make the relaxation part visible against round-off
    relaxation = RelaxationParams(T1e=1e-6, Tzq=1e-5)
    hamiltonian = drift_hamiltonian(params) + control_hamiltonian(DnpMechanism.OE, 8e6)

    def splitting_error(dt: float) -> float:
        full = evolution_super(hamiltonian, dt, relaxation, params, frame)
        half = evolution_super(hamiltonian, dt / 2, relaxation, params, frame)
        return float(np.abs(full.matrix - half.power(2).matrix).max())

    ratio = splitting_error(2e-9) / splitting_error(1e-9)
    assert 3.5 < ratio < 4.5


def test_relaxation_slices_follow_shortest_lifetime(relaxation, relaxation_with_dq):
    step = relaxation.default_time_step()

    assert relaxation_slices(step, relaxation) == 20
    assert relaxation_slices(step, relaxation, frozenset({RelaxationKind.TX})) == 1
    assert relaxation_slices(0.0, relaxation) == 1
    assert relaxation_slices(step, relaxation_with_dq, ALL_CHANNELS) == 20


def test_sliced_relaxation_keeps_equilibrium(relaxation, params, frame):
    sliced = sliced_relaxation_super(1e-4, relaxation, params, frame)
    rho = equilibrium_state(params, frame)

    assert validate_cptp(sliced).passed
    assert np.abs(unvec(sliced.matrix @ vec(rho.matrix)) - rho.matrix).max() < 1e-14


def test_transition_angle_unitary(frame):
    unitary = transition_angle_unitary((pi, 0.0, 0.0, 0.0), frame)
    dressed = frame.to_dressed(unitary)

    # a π rotation swaps ↑α̃ and ↓α̃ and leaves the β̃ levels alone
    assert abs(dressed[2, 0]) == pytest.approx(1.0)
    assert abs(dressed[1, 1]) == pytest.approx(1.0)
    assert np.abs(unitary @ unitary.conj().T - np.eye(4)).max() < 1e-12


def _dressed_fixed_point(kind, params, relaxation, frame, n_cycles=1):
    cycle = ideal_dnp_map(kind, params, relaxation, n_cycles=n_cycles, frame=frame)
    state = fixed_point(cycle, reference=equilibrium_state(params, frame))
    return state, pauli_decompose(frame.to_dressed(state.matrix))


def test_overhauser_fixed_point_pattern(params, relaxation, frame):
    state, coefficients = _dressed_fixed_point(DnpMechanism.OE, params, relaxation, frame)
    thermal = pauli_decompose(thermal_state(params).matrix)

    assert coefficients["II"].real == pytest.approx(0.25)
    assert coefficients["IZ"].real > 0
    assert abs(coefficients["ZI"]) < 0.1 * abs(thermal["ZI"])
    assert abs(coefficients["YI"]) > 1e-8
    # the two electron transitions carry slightly unequal coherences
    assert 1e-12 < abs(coefficients["YZ"]) < abs(coefficients["YI"])
    assert abs(coefficients["XY"]) < 1e-9
    assert abs(coefficients["YX"]) < 1e-9

    assert state_enhancement(state, params, frame).enhancement > 1


def test_solid_effect_fixed_point_pattern(params, relaxation, frame):
    _, coefficients = _dressed_fixed_point(DnpMechanism.SE, params, relaxation, frame)
    thermal = pauli_decompose(thermal_state(params).matrix)

    assert coefficients["IZ"].real < 0
    assert 0.5 < coefficients["ZI"].real / thermal["ZI"].real < 1.5
    assert abs(coefficients["XY"]) > 1e-10
    assert coefficients["XY"] == pytest.approx(-coefficients["YX"], abs=1e-12)
    assert abs(coefficients["XX"]) < 1e-12
    assert abs(coefficients["YY"]) < 1e-12


def test_overhauser_and_solid_effect_polarize_oppositely(params, relaxation, frame):
    _, overhauser = _dressed_fixed_point(DnpMechanism.OE, params, relaxation, frame)
    _, solid = _dressed_fixed_point(DnpMechanism.SE, params, relaxation, frame)

    assert np.sign(overhauser["IZ"].real) == -np.sign(solid["IZ"].real)


def test_fixed_point_stable_under_cycle_doubling(params, relaxation, frame):
    single, _ = _dressed_fixed_point(DnpMechanism.OE, params, relaxation, frame, 1)
    double, _ = _dressed_fixed_point(DnpMechanism.OE, params, relaxation, frame, 2)

    assert np.abs(single.matrix - double.matrix).max() < 1e-8


def test_ideal_map_rejects_zero_cycles(params, relaxation):
    with pytest.raises(ValueError):
        ideal_dnp_map(DnpMechanism.OE, params, relaxation, n_cycles=0)


def test_enhancement_reference_points(params):
    thermal_n = partial_trace(thermal_state(params), Subsystem.NUCLEUS)
    assert enhancement(thermal_n, params).enhancement == pytest.approx(-1.0, rel=1e-8)

    mixed = DensityMatrix.from_matrix(np.eye(2) / 2)
    assert enhancement(mixed, params).enhancement == 0

    x = Planck * params.omega_S / (Boltzmann * params.temperature)
    electron_scale = DensityMatrix.from_matrix(np.diag([1 + tanh(x / 2), 1 - tanh(x / 2)]) / 2)
    metrics = enhancement(electron_scale, params)
    assert metrics.enhancement == pytest.approx(params.omega_S / params.omega_I, rel=1e-4)
    assert not metrics.exceeds_cap

    polarized = DensityMatrix.from_matrix(np.diag([1.0, 0.0]))
    assert enhancement(polarized, params).exceeds_cap


def test_thermal_nuclear_polarization(params):
    y = Planck * params.omega_I / (Boltzmann * params.temperature)
    assert thermal_nuclear_polarization(params) == pytest.approx(tanh(y / 2))


def test_analytic_solid_effect_structure(params, relaxation):
    t = relaxation.T1e / 1000
    result = analytic_reduced_kraus(DnpMechanism.SE, t, params, relaxation)
    m1, m2, m3, m4 = result.kraus.operators

    assert m1[0, 0] == m1[1, 0] == m1[1, 1] == 0
    assert m2[0, 0] == m2[0, 1] == m2[1, 1] == 0
    assert m3[0, 1] == m3[1, 0] == m4[0, 1] == m4[1, 0] == 0
    assert abs(m1[0, 1]) ** 2 / abs(m2[1, 0]) ** 2 == pytest.approx(
        result.params.Gamma / (1 - result.params.Gamma)
    )
    assert result.kraus.completeness_deviation() < 1e-12
    assert result.short_time is None


def test_analytic_overhauser_short_time_forms(params, relaxation):
    t = relaxation.T1e / 1000
    result = analytic_reduced_kraus(DnpMechanism.OE, t, params, relaxation)
    first, second = result.short_time
    prefactor = sqrt(t / (2 * relaxation.Tzq))

    assert first[0, 1] == pytest.approx(prefactor * sqrt(1 - result.params.gammaX))
    assert second[1, 0] == pytest.approx(prefactor * sqrt(result.params.gammaX))
    assert result.kraus.completeness_deviation() < 1e-12


def test_analytic_maps_polarize_oppositely(params, relaxation):
    t = relaxation.T1e / 100
    solid = analytic_reduced_kraus(DnpMechanism.SE, t, params, relaxation).kraus
    overhauser = analytic_reduced_kraus(DnpMechanism.OE, t, params, relaxation).kraus

    assert polarizing_strength(solid) < 0 < polarizing_strength(overhauser)


def test_numeric_reduced_maps_polarize_oppositely(params, relaxation, frame):
    t = relaxation.T1e / 100
    solid = numeric_reduced_map(DnpMechanism.SE, t, params, relaxation, frame)
    overhauser = numeric_reduced_map(DnpMechanism.OE, t, params, relaxation, frame)

    assert polarizing_strength(solid) < 0 < polarizing_strength(overhauser)


def test_hyperfine_etas(params):
    eta_plus, eta_minus = hyperfine_etas(params)
    a, b, w = params.A, params.B, params.omega_I

    assert eta_plus == pytest.approx(sqrt(4 * a * a + 4 * b * b + 4 * a * w + w * w))
    assert eta_minus == pytest.approx(sqrt(4 * a * a + 4 * b * b - 4 * a * w + w * w))


def test_convergence_report_shape(params, relaxation):
    times = [relaxation.T1e / 1000, relaxation.T1e / 300, relaxation.T1e / 100]
    report = reduced_map_convergence(DnpMechanism.SE, times, params, relaxation)

    assert report.times == tuple(times)
    assert len(report.errors) == 3
    assert all(np.isfinite(report.errors))


def test_identity_kraus_has_no_polarizing_strength():
    assert polarizing_strength(KrausSet.identity(2)) == 0
