import csv
import hashlib
import json
from pathlib import Path
from typing import Any, Iterable, Mapping, NamedTuple, Optional, Sequence

from dnp_control.channels import KrausSet, SuperMatrix, fixed_point
from dnp_control.harness.angle_map import AngleMapResult
from dnp_control.harness.buildup import BuildupCurve
from dnp_control.harness.sweep import DqLeakageReport, SweepTable
from dnp_control.quantum import PAULI_LABELS, DensityMatrix, Frame, pauli_decompose
from dnp_control.util import Logger

SIGNIFICANT_DIGITS = 12
MANIFEST_NAME = "manifest.json"
SUMMARY_NAME = "summary.txt"

Row = Mapping[str, Any]


class PauliRow(NamedTuple):
    label: str
    coefficient: float


def final_state_report(
    channel: SuperMatrix | KrausSet,
    frame: Optional[Frame] = None,
    reference: Optional[DensityMatrix] = None,
) -> tuple[PauliRow, ...]:
    """Pauli coefficients of the map's fixed point, II first and ZZ last.

    The state is read in the dressed basis of `frame` when one is given.
    `reference` is the state the fixed point solve is anchored to.

    Raises:
        DegenerateFixedPointError: The map has more than one fixed point.
    """
    state = fixed_point(channel, reference=reference).matrix
    if frame is not None:
        state = frame.to_dressed(state)

    coefficients = pauli_decompose(state)

    return tuple(PauliRow(label, coefficients[label].real) for label in PAULI_LABELS)


def format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"

    return str(value)


def write_csv(
    path: Path,
    fieldnames: Sequence[str],
    rows: Iterable[Row],
    header: Optional[Mapping[str, Any]] = None,
) -> Path:
    """CSV table preceded by ``# key=value`` lines, floats to 12 digits."""
    path.parent.mkdir(parents=True, exist_ok=True)

    with path.open("w", encoding="utf-8", newline="") as file:
        for key, value in (header or {}).items():
            file.write(f"# {key}={format_value(value)}\n")

        writer = csv.DictWriter(
            file, fieldnames=list(fieldnames), extrasaction="ignore", lineterminator="\n"
        )
        writer.writeheader()
        for row in rows:
            writer.writerow({key: format_value(row.get(key, "")) for key in fieldnames})

    Logger.debug(f"wrote {path}")
    return path


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(
    out_dir: Path,
    command: str,
    seed: int,
    version: str,
    config: Any,
    artifacts: Sequence[Path],
) -> Path:
    """Everything needed to rerun `command`: config snapshot, seed and hashes."""
    manifest = {
        "command": command,
        "seed": seed,
        "version": version,
        "config": config,
        "artifacts": [
            {"path": artifact.name, "sha256": _sha256(artifact)} for artifact in artifacts
        ],
    }

    path = out_dir / MANIFEST_NAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_summary(out_dir: Path, lines: Iterable[str]) -> Path:
    path = out_dir / SUMMARY_NAME
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
    return path


def curve_rows(curve: BuildupCurve) -> list[Row]:
    return [
        {"time": time, "enhancement": value}
        for time, value in zip(curve.times, curve.enhancements)
    ]


def angle_map_rows(result: AngleMapResult) -> list[Row]:
    return [
        {"theta_x": float(x), "theta_y": float(y), "enhancement": float(result.enhancements[i, j])}
        for i, y in enumerate(result.y_values)
        for j, x in enumerate(result.x_values)
    ]


def sweep_rows(table: SweepTable) -> list[Row]:
    return [
        {"pulse": label, "value": float(value), "enhancement": float(table.enhancements[i, j])}
        for i, label in enumerate(table.labels)
        for j, value in enumerate(table.spec.values)
    ]


def leakage_rows(report: DqLeakageReport) -> list[Row]:
    return [
        {"pulse": label, "baseline": before, "with_dq": after, "change": after - before}
        for label, before, after in zip(report.labels, report.baseline, report.leakage)
    ]
