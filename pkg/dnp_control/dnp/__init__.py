from .analytic import (
    AnalyticReducedKraus,
    ConvergenceReport,
    ReducedKrausParams,
    analytic_reduced_kraus,
    closed_form_params,
    hyperfine_etas,
    numeric_reduced_map,
    reduced_map_convergence,
)
from .enhancement import (
    EnhancementMetrics,
    electron_polarization,
    enhancement,
    nuclear_state,
    state_enhancement,
    thermal_nuclear_polarization,
)
from .evolution import (
    DEFAULT_CHANNELS,
    check_time_step,
    configured_channels,
    evolution_step,
    evolution_super,
    relaxation_channels,
    relaxation_slices,
    relaxation_super,
    sliced_relaxation_super,
)
from .ideal import (
    OE_ANGLES,
    SE_ANGLES,
    angle_cycle_map,
    ideal_dnp_map,
    transition_angle_unitary,
)
from .params import RelaxationParams
from .relaxation import (
    RelaxationKind,
    pair_relaxation,
    relaxation_channel,
    t1e_channel,
    tdq_channel,
    tx_channel,
    upper_level_weight,
)
