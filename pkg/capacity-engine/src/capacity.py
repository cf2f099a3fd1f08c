"""Capacidade de emaranhamento de disparo único: max_ψ Γ(ψ) para H_I fixo.

Subida de gradiente projetada na esfera unitária com gradiente numérico por
diferenças centrais, pesquisa em linha com retrocesso e reinícios de Haar
independentes (sementes derivadas de ``SeedSequence(master_seed).spawn``).
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from bloch import SHAPE_THREE_QUBIT, entanglement
from hamiltonians import InteractionSpec
from numeric_core import (
    PureState,
    canonical_phase,
    partial_trace,
    random_amplitudes,
    schmidt_decompose,
)
from rates import RateObjective, f_curve, f_vn_curve, rate_generic

LOGGER = logging.getLogger("capacity")

DEFAULT_RESTARTS = 64
DEFAULT_MASTER_SEED = 20240611
DEFAULT_MAX_ITERATIONS = 5000
DEFAULT_STEP = 0.05
DEFAULT_TOLERANCE = 1e-9
DEFAULT_GRADIENT_STEP = 1e-6

ARMIJO_FRACTION = 1e-4
STEP_GROWTH = 1.5
MAX_STEP = 2.0
MAX_BACKTRACKS = 40
GRADIENT_NORM_ATOL = 1e-7
STALL_GRADIENT_ATOL = 1e-6

TANGLE_GHZ_THRESHOLD = 1e-6
PURITY_ATOL = 1e-8

LABEL_PRODUCT = "product"
LABEL_BISEPARABLE = "biseparable"
LABEL_W = "W-class"
LABEL_GHZ = "GHZ-class"


@dataclass(frozen=True)
class OptimizationConfig:
    restarts: int = DEFAULT_RESTARTS
    master_seed: int = DEFAULT_MASTER_SEED
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    step: float = DEFAULT_STEP
    tolerance: float = DEFAULT_TOLERANCE
    gradient_step: float = DEFAULT_GRADIENT_STEP
    workers: int = 1

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise ValueError(f"restarts deve ser >= 1 (restarts={self.restarts})")
        if self.tolerance <= 0:
            raise ValueError(f"tolerância deve ser positiva ({self.tolerance})")
        if self.max_iterations < 1 or self.step <= 0 or self.gradient_step <= 0:
            raise ValueError("max_iterations, step e gradient_step devem ser > 0")
        if self.workers < 1:
            raise ValueError(f"workers deve ser >= 1 (workers={self.workers})")


@dataclass(frozen=True)
class RestartSummary:
    index: int
    gamma: float
    iterations: int
    converged: bool


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    spec: InteractionSpec
    best_state: PureState
    gamma_max: float
    entanglement_of_optimum: float
    restarts: Tuple[RestartSummary, ...]
    best_restart: int
    schmidt_coefficients: Optional[Tuple[float, ...]] = None
    three_tangle: Optional[float] = None
    classification: Optional[str] = None

    @property
    def converged(self) -> bool:
        return self.restarts[self.best_restart].converged


@dataclass(frozen=True)
class _AscentOutcome:
    amps: np.ndarray
    gamma: float
    iterations: int
    converged: bool


def _numerical_gradient(
    objective: RateObjective, amps: np.ndarray, h: float
) -> np.ndarray:
    """∂Γ/∂Re(c) + i ∂Γ/∂Im(c) por diferenças centrais num único lote."""

    n = amps.size
    directions = np.concatenate([np.eye(n), 1j * np.eye(n)]) * h
    batch = np.concatenate([amps + directions, amps - directions])
    values = objective.values(batch)
    half = len(directions)
    slopes = (values[:half] - values[half:]) / (2.0 * h)
    return slopes[:n] + 1j * slopes[n:]


def _project_tangent(amps: np.ndarray, gradient: np.ndarray) -> np.ndarray:
    radial = np.real(np.vdot(amps, gradient))
    return gradient - radial * amps


def _ascend(
    objective: RateObjective, start: np.ndarray, config: OptimizationConfig
) -> _AscentOutcome:
    amps = start / np.linalg.norm(start)
    gamma = objective(amps)
    step = config.step
    iterations = 0
    converged = False

    while iterations < config.max_iterations:
        iterations += 1
        gradient = _project_tangent(
            amps, _numerical_gradient(objective, amps, config.gradient_step)
        )
        slope = float(np.real(np.vdot(gradient, gradient)))
        if slope < GRADIENT_NORM_ATOL**2:
            converged = True
            break

        accepted = False
        for _ in range(MAX_BACKTRACKS):
            trial = amps + step * gradient
            trial = trial / np.linalg.norm(trial)
            trial_gamma = objective(trial)
            if trial_gamma >= gamma + ARMIJO_FRACTION * step * slope:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True
            break

        improvement = trial_gamma - gamma
        amps, gamma = canonical_phase(trial), trial_gamma
        step = min(step * STEP_GROWTH, MAX_STEP)
        # ganho abaixo da tolerância só conta perto de um ponto estacionário
        if improvement < config.tolerance and slope < STALL_GRADIENT_ATOL**2:
            converged = True
            break

    return _AscentOutcome(amps, gamma, iterations, converged)


def _restart_seeds(config: OptimizationConfig) -> List[np.random.SeedSequence]:
    return np.random.SeedSequence(config.master_seed).spawn(config.restarts)


def _run_restart(
    objective: RateObjective,
    seed: np.random.SeedSequence,
    index: int,
    config: OptimizationConfig,
    start_unitary: Optional[np.ndarray] = None,
) -> _AscentOutcome:
    rng = np.random.default_rng(seed)
    start = random_amplitudes(objective.dimension, rng)
    if start_unitary is not None:
        start = start_unitary @ start
    outcome = _ascend(objective, start, config)
    LOGGER.debug(
        "reinício %d: Γ=%.9f após %d iterações (convergiu=%s)",
        index,
        outcome.gamma,
        outcome.iterations,
        outcome.converged,
    )
    return outcome


def maximize_rate(
    spec: InteractionSpec,
    config: Optional[OptimizationConfig] = None,
    *,
    start_unitary: Optional[np.ndarray] = None,
) -> OptimizationResult:
    """Maior Γ sobre os reinícios.

    ``start_unitary`` (opcional) é aplicado a cada ponto inicial de Haar, por
    exemplo uma unitária local U_A ⊗ U_B; o ótimo não deve depender dele.
    """

    config = config or OptimizationConfig()
    objective = RateObjective(spec)
    seeds = _restart_seeds(config)
    if start_unitary is not None:
        start_unitary = np.asarray(start_unitary, dtype=np.complex128)
        size = objective.dimension
        if start_unitary.shape != (size, size):
            raise ValueError(
                f"start_unitary {start_unitary.shape} incompatível com "
                f"dimensão {size}"
            )

    def task(index: int) -> _AscentOutcome:
        return _run_restart(objective, seeds[index], index, config, start_unitary)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            outcomes = list(executor.map(task, range(config.restarts)))
    else:
        outcomes = [task(index) for index in range(config.restarts)]

    # maior Γ; empates resolvidos pelo menor índice de reinício
    best_index = max(range(len(outcomes)), key=lambda i: (outcomes[i].gamma, -i))
    best = outcomes[best_index]
    state = PureState.normalized(spec.dims, canonical_phase(best.amps))
    gamma_max = rate_generic(state, spec).gamma
    summaries = tuple(
        RestartSummary(i, o.gamma, o.iterations, o.converged)
        for i, o in enumerate(outcomes)
    )
    if not best.converged:
        LOGGER.warning(
            "melhor reinício (%d) atingiu o limite de %d iterações sem convergir",
            best_index,
            config.max_iterations,
        )
    LOGGER.info(
        "capacidade %s: Γmax=%.9f (reinício %d de %d)",
        spec.system,
        gamma_max,
        best_index,
        config.restarts,
    )

    schmidt: Optional[Tuple[float, ...]] = None
    tangle: Optional[float] = None
    label: Optional[str] = None
    if len(state.dims) == 2:
        schmidt = tuple(float(c) for c in schmidt_decompose(state).coefficients)
    else:
        tangle = three_tangle(state)
        label = classify_three_qubit(state)

    return OptimizationResult(
        spec=spec,
        best_state=state,
        gamma_max=gamma_max,
        entanglement_of_optimum=entanglement(state),
        restarts=summaries,
        best_restart=best_index,
        schmidt_coefficients=schmidt,
        three_tangle=tangle,
        classification=label,
    )


def _golden_maximum(function, bracket: Tuple[float, float, float]):
    result = minimize_scalar(
        lambda p: -function(p),
        bracket=bracket,
        method="golden",
        options={"xtol": 1e-12},
    )
    p_star = float(result.x)
    return p_star, function(p_star)


def capacity_two_qubit_vn() -> Tuple[float, float]:
    """(p0, Γmax) de f_VN por secção áurea em (0, 1/2)."""

    return _golden_maximum(f_vn_curve, (0.01, 0.1, 0.45))


def capacity_two_qubit_tensor() -> Tuple[float, float]:
    """(p*, max f) para a medida ‖T‖ − 1; Γmax = max f · (μ1 + μ2)."""

    return _golden_maximum(f_curve, (0.01, 0.1, 0.45))


def _require_three_qubit(state: PureState) -> None:
    if tuple(state.dims) != SHAPE_THREE_QUBIT:
        raise ValueError(f"estado de três qubits esperado, dims={state.dims}")


def three_tangle(state: PureState) -> float:
    """4·|hiperdeterminante de Cayley| da tabela 2×2×2 de amplitudes."""

    _require_three_qubit(state)
    a = state.amps.reshape(2, 2, 2)
    d1 = (
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2
        + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2
        + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2
    )
    d2 = (
        a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
        + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1]
    )
    d3 = (
        a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
        + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0]
    )
    return float(4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3))


def _is_pure(rho: np.ndarray) -> bool:
    purity = float(np.real(np.trace(rho @ rho)))
    return purity > 1.0 - PURITY_ATOL


def classify_three_qubit(state: PureState) -> str:
    _require_three_qubit(state)
    rho = state.density()
    pure_marginals = sum(
        _is_pure(partial_trace(rho, state.dims, {party})) for party in range(3)
    )
    if pure_marginals == 3:
        return LABEL_PRODUCT
    if pure_marginals >= 1:
        return LABEL_BISEPARABLE
    if three_tangle(state) < TANGLE_GHZ_THRESHOLD:
        return LABEL_W
    return LABEL_GHZ


@dataclass(frozen=True)
class IsotropicScanRow:
    strength: float
    gamma_max: float
    gamma_per_strength: float
    entanglement_of_optimum: float


def isotropic_scan(
    system: str,
    strengths: Sequence[float],
    config: Optional[OptimizationConfig] = None,
) -> List[IsotropicScanRow]:
    """Capacidade isotrópica para vários μ; regista E do ótimo em cada um."""

    rows: List[IsotropicScanRow] = []
    for strength in strengths:
        if strength <= 0:
            raise ValueError(f"intensidade isotrópica deve ser positiva ({strength})")
        result = maximize_rate(InteractionSpec.isotropic(system, strength), config)
        rows.append(
            IsotropicScanRow(
                strength=float(strength),
                gamma_max=result.gamma_max,
                gamma_per_strength=result.gamma_max / strength,
                entanglement_of_optimum=result.entanglement_of_optimum,
            )
        )
    return rows


def von_neumann_entropy(state: PureState) -> float:
    """Entropia (bits) do estado reduzido da primeira parte, via pesos de Schmidt."""

    weights = schmidt_decompose(state).weights
    weights = weights[weights > 1e-15]
    return float(-np.sum(weights * np.log2(weights)))
