from math import inf

import numpy as np
import pytest

from dnp_control.channels import kraus_to_super, validate_cptp
from dnp_control.dnp import RelaxationKind, RelaxationParams, configured_channels
from dnp_control.pulse import (
    OptimizerConfig,
    PulseMode,
    PulseSequence,
    Segment,
    SegmentState,
    compare_modes,
    free_evolution,
    hard_pulse,
    nelder_mead,
    objective,
    optimize_pulse,
    pulse_map,
    pulse_super,
    reduced_map_fidelity,
    saturation_cycle,
    target_unitary,
)
from dnp_control.quantum import SpinSystemParams, spin_operators
from dnp_control.util import ConfigError, NumericalError

MODES = (PulseMode.OPEN, PulseMode.CLOSED)


@pytest.fixture
def three_pulse() -> PulseSequence:
    return PulseSequence.from_durations([1e-8, 3e-8, 2e-8, 1.5e-8, 0.5e-8, 4e-8, 1e-8])


@pytest.fixture
def weak_coupling() -> SpinSystemParams:
    # negligible nuclear precession and no hyperfine coupling
    return SpinSystemParams(omega_I=1e-3, A=0.0, B=0.0)


def test_target_unitary_acts_on_the_electron():
    target = target_unitary()
    ops = spin_operators()

    assert np.abs(target @ target.conj().T - np.eye(4)).max() < 1e-14
    assert np.abs(np.linalg.matrix_power(target, 4) + np.eye(4)).max() < 1e-14
    for name in ("Ix", "Iy", "Iz"):
        assert np.abs(target @ ops[name] - ops[name] @ target).max() < 1e-14


def test_from_durations_alternates_delays_and_pulses():
    sequence = PulseSequence.from_durations([1.0, 2.0, 3.0, 4.0, 5.0])

    assert [segment.state for segment in sequence.segments] == [
        SegmentState.OFF,
        SegmentState.ON,
        SegmentState.OFF,
        SegmentState.ON,
        SegmentState.OFF,
    ]
    assert sequence.n_pulses == 2
    assert sequence.total_duration == 15.0

    with pytest.raises(ValueError):
        PulseSequence.from_durations([1.0, 2.0])


def test_create_reports_every_problem():
    with pytest.raises(ConfigError) as error:
        PulseSequence.create(
            [Segment(SegmentState.ON, -1.0), Segment(SegmentState.OFF, inf)],
            omega_d=0.0,
        )

    assert len(error.value.errors) == 3

    with pytest.raises(ConfigError):
        PulseSequence.create([Segment(SegmentState.ON, 0.0)])


def test_sequence_record_round_trip(three_pulse, tmp_path):
    path = tmp_path / "pulse.json"
    three_pulse.save_to_file(path)

    assert PulseSequence.load_from_file(path) == three_pulse


def test_sequence_record_rejects_unknown_keys():
    with pytest.raises(ConfigError) as error:
        PulseSequence.load_from_json(
            '{"segments": [{"state": "on", "duration": 1e-8}], "omega_x": 1}'
        )

    assert any("omega_x" in line for line in error.value.errors)


def test_hard_pulse_is_a_nominal_quarter_period():
    pulse = hard_pulse(8e6)

    assert pulse.n_pulses == 1
    assert pulse.total_duration == pytest.approx(3.125e-8)


@pytest.mark.parametrize("mode", MODES)
def test_zero_durations_give_identity(mode, params, relaxation):
    sequence = PulseSequence.from_durations(np.zeros(5))
    channel = pulse_map(sequence, params, relaxation, mode)

    assert np.abs(kraus_to_super(channel).matrix - np.eye(16)).max() < 1e-12


def test_closed_map_is_a_single_unitary(three_pulse, params, relaxation):
    channel = pulse_map(three_pulse, params, relaxation, PulseMode.CLOSED)
    (unitary,) = channel.operators

    assert np.abs(unitary @ unitary.conj().T - np.eye(4)).max() < 1e-10


def test_open_map_is_cptp(three_pulse, params, relaxation):
    assert validate_cptp(pulse_map(three_pulse, params, relaxation, PulseMode.OPEN)).passed


def test_open_map_without_relaxation_matches_closed(three_pulse, params):
    frozen = RelaxationParams(T1e=inf, Tzq=inf)
    open_map = pulse_super(three_pulse, params, frozen)
    closed_map = kraus_to_super(pulse_map(three_pulse, params, frozen, PulseMode.CLOSED))

    assert np.abs(open_map.matrix - closed_map.matrix).max() < 1e-9


def test_rejects_non_positive_time_step(three_pulse, params, relaxation):
    with pytest.raises(ValueError):
        pulse_super(three_pulse, params, relaxation, dt_max=0.0)


def test_resonant_hard_pulse_reaches_the_target(weak_coupling, relaxation):
    pulse = hard_pulse(8e6)

    assert objective(pulse, weak_coupling, relaxation, PulseMode.CLOSED) < 1e-12


def test_objective_is_bounded(params, relaxation, rng):
    for _ in range(20):
        sequence = PulseSequence.from_durations(rng.uniform(0, 5e-7, 5))
        for mode in MODES:
            assert 0 <= objective(sequence, params, relaxation, mode) <= 1


def test_objective_invariant_under_segment_split(three_pulse, params, relaxation):
    split = three_pulse.split(1, 0.3)

    assert len(split.segments) == len(three_pulse.segments) + 1
    assert split.total_duration == pytest.approx(three_pulse.total_duration, rel=1e-15)

    closed = [objective(s, params, relaxation, PulseMode.CLOSED) for s in (three_pulse, split)]
    assert closed[0] == pytest.approx(closed[1], abs=1e-12)

    opened = [
        objective(s, params, relaxation, PulseMode.OPEN, dt_max=1e-13)
        for s in (three_pulse, split)
    ]
    assert opened[0] == pytest.approx(opened[1], abs=1e-8)


def test_compare_modes_reports_both(three_pulse, params, relaxation):
    comparison = compare_modes(three_pulse, params, relaxation)

    assert 0 <= comparison.open_objective <= 1
    assert 0 <= comparison.closed_objective <= 1
    assert comparison.difference == comparison.open_objective - comparison.closed_objective


def test_configured_channels_follow_tdq(relaxation):
    assert RelaxationKind.TDQ not in configured_channels(relaxation)
    assert RelaxationKind.TDQ in configured_channels(relaxation.with_tdq_ratio(2.0))


def test_saturation_cycle_with_delay_is_cptp(params, relaxation):
    cycle = saturation_cycle(hard_pulse(), params, relaxation, delay=1e-6)

    assert validate_cptp(cycle).passed

    with pytest.raises(ValueError):
        saturation_cycle(hard_pulse(), params, relaxation, delay=-1.0)


def test_nelder_mead_quadratic():
    center = np.array([0.3, 1.2, 0.0])
    result = nelder_mead(lambda x: float(np.sum((x - center) ** 2)), [1.0, 1.0, 1.0], tol=1e-16)

    assert result.converged
    assert np.abs(result.x - center).max() < 1e-6
    assert result.iterations <= 2000


def test_nelder_mead_rosenbrock():
    def rosenbrock(x: np.ndarray) -> float:
        return float(100 * (x[1] - x[0] ** 2) ** 2 + (1 - x[0]) ** 2)

    result = nelder_mead(
        rosenbrock, [-1.2, 1.0], tol=1e-16, max_iterations=5000, nonnegative=False
    )

    assert np.abs(result.x - 1).max() < 1e-4


def test_nelder_mead_history_is_deterministic_and_monotone():
    def bumpy(x: np.ndarray) -> float:
        return float(np.sum(np.sin(3 * x) + 0.1 * x**2))

    first = nelder_mead(bumpy, [0.5, 2.0, 1.0], max_iterations=200)
    second = nelder_mead(bumpy, [0.5, 2.0, 1.0], max_iterations=200)

    assert first.history == second.history
    assert np.all(np.diff(first.history) <= 0)
    assert first.fun <= first.history[0]
    assert np.all(first.x >= 0)


def test_nelder_mead_rejects_non_finite_values():
    with pytest.raises(NumericalError):
        nelder_mead(lambda x: float("nan"), [1.0])


def test_optimizer_config_validation():
    with pytest.raises(ConfigError) as error:
        OptimizerConfig.create(n_pulses=0, restarts=0, dt_max=-1.0)

    assert len(error.value.errors) == 3


def test_optimize_pulse_is_independent_of_threads(params, relaxation):
    config = OptimizerConfig.create(
        mode=PulseMode.CLOSED, n_pulses=1, restarts=3, max_iterations=40, rng_seed=7
    )

    single = optimize_pulse(config, params, relaxation, threads=1)
    pooled = optimize_pulse(config, params, relaxation, threads=3)

    assert single.sequence == pooled.sequence
    assert single.objective_history == pooled.objective_history
    assert 0 <= single.gate_fidelity <= 1
    assert 0 <= single.reduced_map_fidelity <= 1
    assert single.gate_fidelity == pytest.approx(
        1 - objective(single.sequence, params, relaxation, PulseMode.CLOSED)
    )


def test_reduced_map_fidelity_rejects_zero_cycles(params, relaxation):
    with pytest.raises(ValueError):
        reduced_map_fidelity(hard_pulse(), params, relaxation, n_cycles=0)


@pytest.mark.slow
def test_hard_pulse_beats_free_evolution_on_reduced_map(params, relaxation):
    hard = reduced_map_fidelity(hard_pulse(), params, relaxation)
    idle = reduced_map_fidelity(free_evolution(hard_pulse().total_duration), params, relaxation)

    assert idle < hard < 1


@pytest.mark.slow
def test_optimized_pulses_order_open_closed_hard(params, relaxation):
    fidelities = {}
    for mode, pulses in ((PulseMode.OPEN, 3), (PulseMode.CLOSED, 2)):
        config = OptimizerConfig.create(mode=mode, n_pulses=pulses, restarts=8, rng_seed=1)
        fidelities[mode] = optimize_pulse(config, params, relaxation).reduced_map_fidelity

    hard = reduced_map_fidelity(hard_pulse(), params, relaxation)
    assert fidelities[PulseMode.OPEN] > fidelities[PulseMode.CLOSED] > hard

