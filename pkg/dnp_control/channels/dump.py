"""Plain text dump of complex matrices for comparison with other tools.

One matrix row per line, entries separated by spaces, each entry written as
``re,im`` with 17 significant digits.
"""

from pathlib import Path

import numpy as np
import numpy.typing as npt

from dnp_control.channels.kraus import KrausSet
from dnp_control.channels.representations import SuperMatrix, as_super
from dnp_control.util.types import ComplexMatrix, as_complex_matrix


def format_matrix(matrix: npt.ArrayLike) -> str:
    matrix = as_complex_matrix(matrix)
    return "".join(
        " ".join(f"{value.real:.17g},{value.imag:.17g}" for value in row) + "\n"
        for row in matrix
    )


def parse_matrix(text: str) -> ComplexMatrix:
    rows = []

    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append(
                [complex(*map(float, entry.split(","))) for entry in line.split()]
            )
        except (TypeError, ValueError) as error:
            raise ValueError(f"line {number}: malformed entry ({error})") from error

    return np.array(rows, dtype=np.complex128)


def dump_map(channel: KrausSet | SuperMatrix, path: Path) -> None:
    """Write the supermatrix of a channel."""
    path.write_text(format_matrix(as_super(channel).matrix), encoding="utf-8")


def load_map(path: Path) -> SuperMatrix:
    return SuperMatrix.create(parse_matrix(path.read_text(encoding="utf-8")))
