"""Derivative free simplex search.

Standard reflection, expansion, contraction and shrink steps with the
coefficients 1, 2, 0.5 and 0.5. With `nonnegative` set every trial point is
mirrored to its absolute value before it is evaluated, which keeps pulse
durations physical without a penalty term.
"""

from math import isfinite
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
import numpy.typing as npt

from dnp_control.util import Logger, NumericalError
from dnp_control.util.types import RealVector

REFLECTION = 1.0
EXPANSION = 2.0
CONTRACTION = 0.5
SHRINK = 0.5

# Initial step for a coordinate starting at zero when no step is given.
ZERO_COORDINATE_STEP = 2.5e-4
RELATIVE_STEP = 0.05


class SimplexResult(NamedTuple):
    x: RealVector
    fun: float
    history: tuple[float, ...]
    iterations: int
    converged: bool


def initial_simplex(
    x0: npt.ArrayLike,
    step: Optional[float | Sequence[float]] = None,
) -> list[RealVector]:
    """x0 plus one vertex per coordinate displaced by `step`."""
    x0 = np.asarray(x0, dtype=np.float64).ravel()

    if step is None:
        steps = np.where(x0 != 0, RELATIVE_STEP * x0, ZERO_COORDINATE_STEP)
    else:
        steps = np.broadcast_to(np.asarray(step, dtype=np.float64), x0.shape)

    vertices = [x0.copy()]
    for index in range(x0.size):
        vertex = x0.copy()
        vertex[index] += steps[index]
        vertices.append(vertex)

    return vertices


def nelder_mead(
    func: Callable[[RealVector], float],
    x0: npt.ArrayLike,
    step: Optional[float | Sequence[float]] = None,
    tol: float = 1e-10,
    max_iterations: int = 2000,
    nonnegative: bool = True,
) -> SimplexResult:
    """Minimize `func` starting from the simplex around `x0`.

    Stops when the spread of objective values over the simplex falls below
    `tol` or after `max_iterations`. `history` holds the best value before
    the first and after every iteration.

    Raises:
        ValueError: `x0` is empty.
        NumericalError: `func` returned a value that is not finite.
    """
    if np.size(x0) < 1:
        raise ValueError("nelder_mead needs at least one coordinate")

    def evaluate(point: RealVector) -> tuple[RealVector, float]:
        if nonnegative:
            point = np.abs(point)

        value = float(func(point))
        if not isfinite(value):
            raise NumericalError(f"objective returned {value} at {point.tolist()}")

        return point, value

    simplex = [evaluate(vertex) for vertex in initial_simplex(x0, step)]
    simplex.sort(key=lambda vertex: vertex[1])
    history = [simplex[0][1]]

    iterations = 0
    converged = False

    while iterations < max_iterations:
        if simplex[-1][1] - simplex[0][1] < tol:
            converged = True
            break

        iterations += 1
        worst_x, worst_f = simplex[-1]
        centroid = np.mean([x for x, _ in simplex[:-1]], axis=0)

        reflected = evaluate(centroid + REFLECTION * (centroid - worst_x))

        if simplex[0][1] <= reflected[1] < simplex[-2][1]:
            simplex[-1] = reflected
        elif reflected[1] < simplex[0][1]:
            expanded = evaluate(centroid + EXPANSION * (reflected[0] - centroid))
            simplex[-1] = expanded if expanded[1] < reflected[1] else reflected
        else:
            if reflected[1] < worst_f:
                contracted = evaluate(centroid + CONTRACTION * (reflected[0] - centroid))
                accept = contracted[1] <= reflected[1]
            else:
                contracted = evaluate(centroid + CONTRACTION * (worst_x - centroid))
                accept = contracted[1] < worst_f

            if accept:
                simplex[-1] = contracted
            else:
                best_x = simplex[0][0]
                simplex = [simplex[0]] + [
                    evaluate(best_x + SHRINK * (x - best_x)) for x, _ in simplex[1:]
                ]

        simplex.sort(key=lambda vertex: vertex[1])
        history.append(simplex[0][1])

    Logger.debug(
        f"simplex stopped after {iterations} iterations at {simplex[0][1]:.6g}"
        + ("" if converged else " without converging")
    )

    best_x, best_f = simplex[0]
    return SimplexResult(best_x, best_f, tuple(history), iterations, converged)
