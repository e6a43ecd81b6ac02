"""First order closed forms of the reduced nuclear Kraus operators.

The literal closed-form weights do not satisfy the completeness relation
on their own. Operators are therefore built from them with the diagonal
weights (β±)² solved from Σ M†M = 𝟙. When no non-negative solution
exists the split between the two diagonal operators keeps the literal
ratio and |Δ±| takes the value that closes the relation. The literal values stay
available in `ReducedKrausParams`.
"""

from dataclasses import dataclass, replace
from math import exp, log, sqrt
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.constants import Boltzmann, Planck
from scipy.special import expit

from dnp_control.channels import (
    KrausSet,
    SuperMatrix,
    kraus_to_super,
    reduce_to_nuclear,
)
from dnp_control.dnp.ideal import ideal_dnp_map
from dnp_control.dnp.params import RelaxationParams
from dnp_control.quantum import (
    DnpMechanism,
    Frame,
    SpinSystemParams,
    Subsystem,
    drift_hamiltonian,
    eigenframe,
    partial_trace,
    thermal_state,
)
from dnp_control.util import Logger, ReprInfo
from dnp_control.util.types import ComplexMatrix

FIRST_ORDER_FRACTION = 1 / 20


@dataclass(frozen=True)
class ReducedKrausParams(ReprInfo):
    """Closed-form parameters of both reduced maps, literal values.

    `eta_plus`/`eta_minus` are in Hz; everything else is dimensionless.
    """

    Gamma: float
    alpha: float
    beta_plus: complex
    beta_minus: complex
    Delta_plus: complex
    Delta_minus: complex
    Gamma1: float
    GammaX: float
    alpha_prime: float
    beta_prime_plus: complex
    beta_prime_minus: complex
    Delta_prime_plus: complex
    Delta_prime_minus: complex
    eta_plus: float
    eta_minus: float
    gamma1: float
    gammaX: float
    completeness_adjusted: bool = False

    def __repr_data__(self) -> dict:
        return {
            "Gamma": self.Gamma,
            "Gamma1": self.Gamma1,
            "GammaX": self.GammaX,
            "adjusted": self.completeness_adjusted,
        }


class AnalyticReducedKraus(NamedTuple):
    kraus: KrausSet
    params: ReducedKrausParams
    short_time: Optional[tuple[ComplexMatrix, ComplexMatrix]]


def hyperfine_etas(system: SpinSystemParams) -> tuple[float, float]:
    """η± = sqrt(4A² + 4B² ± 4Aω_I + ω_I²) in Hz."""
    base = 4 * system.A**2 + 4 * system.B**2 + system.omega_I**2
    cross = 4 * system.A * system.omega_I

    return sqrt(base + cross), sqrt(base - cross)


def closed_form_params(
    t: float,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
) -> ReducedKrausParams:
    temperature = relaxation.temperature_for(system)
    x = Planck * system.omega_S / (Boltzmann * temperature)
    y = Planck * system.omega_I / (Boltzmann * temperature)

    gamma1 = float(expit(-x))
    gamma_x = float(expit(-(x - y)))
    eta_plus, eta_minus = hyperfine_etas(system)
    eta_sum = eta_plus + eta_minus

    t1, tx = relaxation.T1e, relaxation.Tzq
    root2 = sqrt(2)

    def beta(sign: int) -> complex:
        return (-sign * 4 - 3 * root2) * (t - 4 * t1) / (8 * sqrt(3 + sign * 2 * root2) * t1)

    def delta(sign: int) -> complex:
        numerator = -8 * t1 + t * (
            2 + sign * root2 + 4j * t1 * eta_sum - sign * 2 * root2 * gamma1
        )
        return numerator / (2 * (t - 4 * t1))

    inner_beta = 4 * (
        -4 * t * tx
        + 8 * tx**2
        + t**2 * (1 + 2 * tx**2 * eta_sum**2 - 2 * gamma_x * (1 - gamma_x))
    )
    inner_delta = 4 * (
        -4 * t * tx
        + 8 * tx**2
        + t**2 * (1 + 2 * tx**2 * eta_sum**2 - 2 * gamma_x + 2 * gamma_x**2)
    )

    def beta_prime(sign: int) -> complex:
        radicand = (-t - sign * 4 * tx + sign * np.emath.sqrt(inner_beta)) / (4 * tx)
        return complex(np.emath.sqrt(radicand))

    def delta_prime(sign: int) -> complex:
        numerator = 2j * (sign * t * (1 - 2 * gamma_x) + np.emath.sqrt(inner_delta))
        denominator = 8j * tx - t * (2j + 4 * tx * eta_sum)
        return complex(numerator / denominator)

    return ReducedKrausParams(
        Gamma=gamma1,
        alpha=sqrt((1 - exp(-t / t1)) / 2),
        beta_plus=beta(1),
        beta_minus=beta(-1),
        Delta_plus=delta(1),
        Delta_minus=delta(-1),
        Gamma1=1 - 2 * gamma1 * (1 - exp(-t / t1)),
        GammaX=gamma_x,
        alpha_prime=exp(-t * (1 / t1 + 1 / tx)) * (exp(t / tx) - 1),
        beta_prime_plus=beta_prime(1),
        beta_prime_minus=beta_prime(-1),
        Delta_prime_plus=delta_prime(1),
        Delta_prime_minus=delta_prime(-1),
        eta_plus=eta_plus,
        eta_minus=eta_minus,
        gamma1=gamma1,
        gammaX=gamma_x,
    )


def _diagonal_operators(
    deltas: tuple[complex, complex],
    betas: tuple[complex, complex],
    top_left: float,
    bottom_right: float,
) -> tuple[list[ComplexMatrix], bool]:
    # Solve b₋|Δ₋|² + b₊|Δ₊|² = top_left and b₋ + b₊ = bottom_right.
    magnitudes = np.abs(np.asarray(deltas)) ** 2
    system = np.array([magnitudes, [1.0, 1.0]])
    weights = None

    if abs(np.linalg.det(system)) > 1e-12 * max(1.0, float(magnitudes.max())):
        solved = np.linalg.solve(system, [top_left, bottom_right])
        if np.all(np.isfinite(solved)) and np.all(solved >= 0):
            weights = solved

    adjusted = weights is None
    deltas_used = np.asarray(deltas, dtype=np.complex128)

    if adjusted:
        literal = np.abs(np.asarray(betas)) ** 2
        share = literal[0] / literal.sum() if literal.sum() > 0 else 0.5
        weights = np.array([share, 1 - share]) * bottom_right
        phases = np.where(deltas_used != 0, deltas_used / np.abs(deltas_used), 1.0)
        deltas_used = phases * sqrt(top_left / bottom_right)

    operators = [
        sqrt(weight) * np.diag([delta, 1.0]).astype(np.complex128)
        for weight, delta in zip(weights, deltas_used)
    ]
    return operators, adjusted


def analytic_reduced_kraus(
    kind: DnpMechanism,
    t: float,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
) -> AnalyticReducedKraus:
    """Reduced nuclear Kraus operators of one DNP cycle of length `t`.

    Solid effect operators carry the weights Γ and 1−Γ, the Overhauser ones
    Γ1(1−Γx) and (1−Γ1)Γx with a √(α'/2) prefactor. For the Overhauser effect
    the short time forms √(t/2T_x)·[[0, √(1−γx)], [0, 0]] and
    √(t/2T_x)·[[0, 0], [√γx, 0]] are returned as well.
    """
    if t > relaxation.shortest_time * FIRST_ORDER_FRACTION:
        Logger.warning(
            f"t = {t:.3g} s is not small against the relaxation times, "
            + "first order closed forms are inaccurate"
        )

    params = closed_form_params(t, system, relaxation)
    short_time = None

    match kind:
        case DnpMechanism.SE:
            scale = params.alpha**2
            raising = params.Gamma
            lowering = 1 - params.Gamma
            deltas = (params.Delta_minus, params.Delta_plus)
            betas = (params.beta_minus, params.beta_plus)
        case DnpMechanism.OE:
            scale = params.alpha_prime / 2
            raising = params.Gamma1 * (1 - params.GammaX)
            lowering = (1 - params.Gamma1) * params.GammaX
            deltas = (params.Delta_prime_minus, params.Delta_prime_plus)
            betas = (params.beta_prime_minus, params.beta_prime_plus)
            prefactor = sqrt(t / (2 * relaxation.Tzq))
            short_time = (
                prefactor * np.array([[0, sqrt(1 - params.gammaX)], [0, 0]], dtype=np.complex128),
                prefactor * np.array([[0, 0], [sqrt(params.gammaX), 0]], dtype=np.complex128),
            )
        case _:
            raise ValueError(f"unknown DNP mechanism: {kind!r}")

    off_diagonal = [
        sqrt(scale * raising) * np.array([[0, 1], [0, 0]], dtype=np.complex128),
        sqrt(scale * lowering) * np.array([[0, 0], [1, 0]], dtype=np.complex128),
    ]
    diagonal, adjusted = _diagonal_operators(
        deltas,
        betas,
        top_left=1 - scale * lowering,
        bottom_right=1 - scale * raising,
    )

    if adjusted:
        Logger.debug(f"{kind.name} closed form |Delta| adjusted to restore completeness")

    return AnalyticReducedKraus(
        kraus=KrausSet.create(off_diagonal + diagonal),
        params=replace(params, completeness_adjusted=adjusted),
        short_time=short_time,
    )


class ConvergenceReport(NamedTuple):
    times: tuple[float, ...]
    errors: tuple[float, ...]
    slope: float


def numeric_reduced_map(
    kind: DnpMechanism,
    t: float,
    system: SpinSystemParams,
    relaxation: RelaxationParams,
    frame: Optional[Frame] = None,
) -> SuperMatrix:
    """Reduced nuclear map of one ideal cycle of length `t`, dressed basis."""
    frame = frame or eigenframe(drift_hamiltonian(system))
    cycle = ideal_dnp_map(kind, system, relaxation, dt=t, frame=frame)
    rho_e = partial_trace(thermal_state(system), Subsystem.ELECTRON)

    return reduce_to_nuclear(SuperMatrix(frame.dress_super(cycle.matrix)), rho_e)


def reduced_map_convergence(
    kind: DnpMechanism,
    times: Sequence[float],
    system: SpinSystemParams,
    relaxation: RelaxationParams,
) -> ConvergenceReport:
    """Distance between closed form and numeric reduced maps over `times`.

    The slope is the least squares log-log slope of the spectral norm error.
    """
    frame = eigenframe(drift_hamiltonian(system))
    errors = []

    for t in times:
        analytic = kraus_to_super(analytic_reduced_kraus(kind, t, system, relaxation).kraus)
        numeric = numeric_reduced_map(kind, t, system, relaxation, frame)
        errors.append(float(np.linalg.norm(analytic.matrix - numeric.matrix, 2)))

    positive = [(log(t), log(e)) for t, e in zip(times, errors) if e > 0]
    slope = float(np.polyfit(*zip(*positive), 1)[0]) if len(positive) >= 2 else float("nan")
    Logger.info(f"{kind.name} closed form vs numeric reduced map: log-log slope {slope:.3g}")

    return ConvergenceReport(tuple(times), tuple(errors), slope)
