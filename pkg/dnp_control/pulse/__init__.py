from .nelder_mead import SimplexResult, initial_simplex, nelder_mead
from .objective import ModeComparison, compare_modes, objective, reduced_map_fidelity
from .optimizer import OptimizerConfig, PulseResult, optimize_pulse
from .pulse_map import (
    PulseMode,
    pulse_map,
    pulse_super,
    pulse_super_for_mode,
    pulse_unitary,
    saturation_cycle,
    saturation_cycles,
    segment_hamiltonian,
    target_unitary,
)
from .sequence import (
    DEFAULT_RABI_FREQUENCY,
    PulseSequence,
    Segment,
    SegmentState,
    free_evolution,
    hard_pulse,
    hard_pulse_duration,
    on_off_pattern,
)
