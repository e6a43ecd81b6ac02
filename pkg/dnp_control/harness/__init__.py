from .angle_map import (
    ANGLE_MAP_PRESETS,
    AngleMapResult,
    AngleMapSpec,
    angle_map_preset,
    dnp_angle_map,
)
from .buildup import (
    BuildupCurve,
    ExponentialFit,
    FitKind,
    TrainPulse,
    asymptotic_enhancement,
    describe_pulse,
    fit_exponential,
    parameter_snapshot,
    run_decay,
    run_saturation_train,
    train_cycle,
)
from .report import (
    PauliRow,
    angle_map_rows,
    curve_rows,
    final_state_report,
    format_value,
    leakage_rows,
    sweep_rows,
    write_csv,
    write_manifest,
    write_summary,
)
from .sweep import (
    DqLeakageReport,
    PulseFactory,
    SweepParameter,
    SweepSpec,
    SweepTable,
    dq_leakage_run,
    fixed_durations,
    hard_pulse_factory,
    sweep,
    sweep_point,
)
