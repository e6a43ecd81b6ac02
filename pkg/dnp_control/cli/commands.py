from argparse import Namespace
from dataclasses import replace
from pathlib import Path
from typing import Callable, NamedTuple, Optional

from dnp_control.channels import KrausSet, SuperMatrix, validate_cptp
from dnp_control.cli.config import RunConfig
from dnp_control.dnp import (
    OE_ANGLES,
    SE_ANGLES,
    configured_channels,
    ideal_dnp_map,
    relaxation_channel,
)
from dnp_control.harness import (
    FitKind,
    PulseFactory,
    SweepParameter,
    TrainPulse,
    angle_map_rows,
    curve_rows,
    dnp_angle_map,
    dq_leakage_run,
    fit_exponential,
    fixed_durations,
    hard_pulse_factory,
    leakage_rows,
    parameter_snapshot,
    run_saturation_train,
    sweep,
    sweep_rows,
    write_csv,
    write_manifest,
    write_summary,
)
from dnp_control.pulse import (
    PulseMode,
    PulseSequence,
    compare_modes,
    hard_pulse,
    optimize_pulse,
    pulse_map,
)
from dnp_control.quantum import DnpMechanism, drift_hamiltonian, eigenframe
from dnp_control.util import ConfigError, Logger


class CommandOutput(NamedTuple):
    artifacts: list[Path]
    summary: list[str]
    passed: bool = True


Command = Callable[[RunConfig, Namespace, Path, Optional[int]], CommandOutput]


def _header(config: RunConfig, **extra: object) -> dict[str, object]:
    return {**extra, "seed": config.seed} | parameter_snapshot(config.system, config.relaxation)


def load_pulse_file(path: str) -> PulseSequence:
    try:
        return PulseSequence.load_from_file(Path(path))
    except FileNotFoundError:
        raise ConfigError([f"pulse file not found: {path}"]) from None


def channel_check(
    config: RunConfig, options: Namespace, out_dir: Path, threads: Optional[int]
) -> CommandOutput:
    """CPTP check of every relaxation channel, the hard pulse and the ideal maps."""
    system, relaxation = config.system, config.relaxation
    settings = config.channel_check
    frame = eigenframe(drift_hamiltonian(system))

    checks: list[tuple[str, float, KrausSet | SuperMatrix]] = []
    for kind in sorted(configured_channels(relaxation), key=lambda kind: kind.value):
        for dt in settings.time_steps:
            checks.append(
                (kind.value, dt, relaxation_channel(kind, dt, relaxation, system, frame))
            )

    pulse = hard_pulse(config.optimize.omega_d)
    for mode in PulseMode:
        channel = pulse_map(pulse, system, relaxation, mode, frame=frame)
        checks.append((f"hard_pulse_{mode.value}", pulse.total_duration, channel))

    step = relaxation.default_time_step()
    for kind in DnpMechanism:
        channel = ideal_dnp_map(kind, system, relaxation, frame=frame)
        checks.append((f"ideal_{kind.name.lower()}", step, channel))

    rows, failures = [], []
    for name, dt, channel in checks:
        result = validate_cptp(channel, settings.tolerance)
        rows.append(
            {
                "channel": name,
                "time_step": dt,
                "status": result.status.value,
                "trace_deviation": result.result.trace_deviation,
                "min_choi_eigenvalue": result.result.min_choi_eigenvalue,
            }
        )
        if not result.passed:
            Logger.error(f"{name} at dt={dt:.3g} is not CPTP: {result.result}")
            failures.append(name)

    path = write_csv(
        out_dir / "channel_check.csv",
        ("channel", "time_step", "status", "trace_deviation", "min_choi_eigenvalue"),
        rows,
        _header(config, tolerance=settings.tolerance),
    )
    passed = len(rows) - len(failures)
    summary = [f"{passed}/{len(rows)} channels CPTP within {settings.tolerance:g}"]

    return CommandOutput([path], summary, not failures)


def optimize(
    config: RunConfig, options: Namespace, out_dir: Path, threads: Optional[int]
) -> CommandOutput:
    """Search the on/off durations closest to the target rotation."""
    overrides = {
        name: value
        for name, value in (
            ("mode", options.mode and PulseMode(options.mode)),
            ("n_pulses", options.pulses),
            ("restarts", options.restarts),
        )
        if value is not None
    }
    settings = replace(config.optimize, **overrides)
    if problems := settings.check():
        raise ConfigError(problems)

    result = optimize_pulse(settings, config.system, config.relaxation, threads=threads)
    comparison = compare_modes(result.sequence, config.system, config.relaxation)

    pulse_path = out_dir / f"pulse_{settings.mode.value}.json"
    result.sequence.save_to_file(pulse_path)

    history_path = write_csv(
        out_dir / "optimize_history.csv",
        ("iteration", "objective"),
        [
            {"iteration": index, "objective": value}
            for index, value in enumerate(result.objective_history)
        ],
        _header(
            config,
            mode=settings.mode.value,
            n_pulses=settings.n_pulses,
            restarts=settings.restarts,
            best_restart=result.restart,
            gate_fidelity=result.gate_fidelity,
            reduced_map_fidelity=result.reduced_map_fidelity,
        ),
    )

    summary = [
        f"pulse: {result.sequence.describe()}",
        f"gate fidelity: {result.gate_fidelity:.6f} (restart {result.restart})",
        f"reduced map fidelity: {result.reduced_map_fidelity:.6f}",
        f"objective open {comparison.open_objective:.6g}, "
        + f"closed {comparison.closed_objective:.6g}",
    ]

    return CommandOutput([pulse_path, history_path], summary)


def resolve_pulse(name: str, omega_d: float) -> TrainPulse:
    match name:
        case "hard":
            return hard_pulse(omega_d)
        case "ideal-oe":
            return OE_ANGLES
        case "ideal-se":
            return SE_ANGLES

    return load_pulse_file(name)


def buildup(
    config: RunConfig, options: Namespace, out_dir: Path, threads: Optional[int]
) -> CommandOutput:
    """Enhancement buildup under a repeated pulse and its exponential fit."""
    settings = config.buildup
    if options.pulse is not None:
        settings = replace(settings, pulse=options.pulse)

    pulse = resolve_pulse(settings.pulse, settings.omega_d)
    curve = run_saturation_train(
        pulse,
        config.system,
        config.relaxation,
        settings.total_time,
        settings.readout_stride,
        delay=settings.delay,
        mode=settings.mode,
    )
    fit = fit_exponential(curve, FitKind.BUILDUP)

    path = write_csv(
        out_dir / "buildup.csv",
        ("time", "enhancement"),
        curve_rows(curve),
        {"asymptote": curve.asymptote, "seed": config.seed} | curve.metadata,
    )

    summary = [
        f"pulse: {curve.metadata['pulse']}",
        f"final enhancement: {curve.enhancements[-1]:.6g}",
        f"asymptotic enhancement: {curve.asymptote:.6g}",
        f"monotone: {curve.is_monotone}",
    ]
    if fit.passed:
        summary.append(
            f"fit: amplitude {fit.result.amplitude:.6g}, "
            + f"time constant {fit.result.time_constant:.6g} s, "
            + f"residual {fit.result.residual:.3g}"
        )
    else:
        summary.append(f"fit: not identifiable (residual {fit.result.residual:.3g})")

    return CommandOutput([path], summary)


def angle_map(
    config: RunConfig, options: Namespace, out_dir: Path, threads: Optional[int]
) -> CommandOutput:
    """Asymptotic enhancement over one preset slice of the rotation angles."""
    settings = config.angle_map
    if options.preset is not None:
        settings = replace(settings, preset=options.preset)
    if options.grid is not None:
        settings = replace(settings, grid=options.grid)

    if problems := settings.check():
        raise ConfigError(problems)

    spec = settings.to_spec()
    result = dnp_angle_map(spec, config.system, config.relaxation, threads=threads)
    x, y = result.argmax()

    path = write_csv(
        out_dir / f"angle_map_{settings.preset.lower()}.csv",
        ("theta_x", "theta_y", "enhancement"),
        angle_map_rows(result),
        _header(
            config,
            preset=settings.preset.lower(),
            grid=spec.grid,
            fixed=" ".join(repr(angle) for angle in spec.fixed),
            x_axis=" ".join(str(int(t)) for t in spec.x_axis),
            y_axis=" ".join(str(int(t)) for t in spec.y_axis),
        ),
    )

    summary = [
        f"preset {settings.preset.lower()}: {spec.grid}x{spec.grid} grid",
        f"maximum {result.enhancements.max():.6g} at theta_x={x:.6g}, theta_y={y:.6g}",
        f"minimum {result.enhancements.min():.6g}",
    ]

    return CommandOutput([path], summary)


def _file_pulses(paths: tuple[str, ...]) -> dict[str, PulseSequence]:
    """Pulse files labelled by file stem; "hard" is taken by the hard pulse."""
    labels = [Path(path).stem for path in paths]
    clashes = sorted({label for label in labels if label == "hard" or labels.count(label) > 1})
    if clashes:
        raise ConfigError([f"pulse_files: duplicate pulse label {label!r}" for label in clashes])

    return {label: load_pulse_file(path) for label, path in zip(labels, paths)}


def run_sweep(
    config: RunConfig, options: Namespace, out_dir: Path, threads: Optional[int]
) -> CommandOutput:
    """Hard pulse and pulse files against one swept parameter."""
    settings = config.sweep
    if options.parameter is not None:
        settings = replace(settings, parameter=SweepParameter(options.parameter))

    pulses: dict[str, PulseFactory] = {"hard": hard_pulse_factory()}
    pulses |= {
        label: fixed_durations(sequence)
        for label, sequence in _file_pulses(settings.pulse_files).items()
    }
    spec = settings.to_spec()
    table = sweep(spec, pulses, config.system, config.relaxation, threads=threads)

    path = write_csv(
        out_dir / f"sweep_{spec.parameter.value}.csv",
        ("pulse", "value", "enhancement"),
        sweep_rows(table),
        _header(config, parameter=spec.parameter.value, omega_d=spec.omega_d, delay=spec.delay),
    )

    summary = [f"{spec.parameter.value} over {len(spec.values)} values"]
    for label in table.labels:
        row = table.row(label)
        best = spec.values[int(row.argmax())]
        summary.append(
            f"{label}: max {row.max():.6g} at {best:.6g}, "
            + f"relative range {table.relative_range(label):.3g}"
        )

    return CommandOutput([path], summary)


def dq_leakage(
    config: RunConfig, options: Namespace, out_dir: Path, threads: Optional[int]
) -> CommandOutput:
    """Enhancements with and without double quantum relaxation."""
    settings = config.dq_leakage
    pulses = {"hard": hard_pulse(config.optimize.omega_d)} | _file_pulses(settings.pulse_files)

    relaxation = config.relaxation.with_tdq_ratio(settings.tdq_ratio)
    report = dq_leakage_run(
        pulses, config.system, relaxation, delay=settings.delay, threads=threads
    )

    path = write_csv(
        out_dir / "dq_leakage.csv",
        ("pulse", "baseline", "with_dq", "change"),
        leakage_rows(report),
        _header(config, tdq_ratio=settings.tdq_ratio, delay=settings.delay),
    )

    summary = [f"T_dq = {report.tdq_ratio:g} T_zq, all lowered: {report.all_lowered}"]
    summary += [
        f"{label}: {before:.6g} -> {after:.6g}"
        for label, before, after in zip(report.labels, report.baseline, report.leakage)
    ]

    return CommandOutput([path], summary)


COMMANDS: dict[str, Command] = {
    "channel-check": channel_check,
    "optimize": optimize,
    "buildup": buildup,
    "angle-map": angle_map,
    "sweep": run_sweep,
    "dq-leakage": dq_leakage,
}


def dispatch(
    config: RunConfig,
    command: str,
    options: Namespace,
    version: str,
    threads: Optional[int] = None,
) -> CommandOutput:
    """Run one command and write its artifacts, summary and manifest.

    Raises:
        ConfigError: Unknown command or invalid command options.
    """
    try:
        runner = COMMANDS[command]
    except KeyError:
        raise ConfigError([f"unknown command {command!r}"]) from None

    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    Logger.info(f"running {command} into {out_dir}")
    output = runner(config, options, out_dir, threads)

    write_summary(out_dir, [f"command: {command}", f"seed: {config.seed}", *output.summary])
    write_manifest(out_dir, command, config.seed, version, config.to_data(), output.artifacts)

    return output
