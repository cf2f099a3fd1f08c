"""Cenário de condução (steering) para dois qubits.

Evolui o par em passos curtos sob H_I e, após cada passo, troca o estado por
ψ_E(p′) com o mesmo peso de Schmidt (operações locais rápidas e ideais),
mantendo-o sempre na família de taxa máxima.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from bloch import decompose, entanglement
from hamiltonians import SYSTEM_TWO_QUBIT, InteractionSpec, build_matrix, timescale
from numeric_core import PureState, evolution_operator, schmidt_decompose
from rates import check_conditions, psi_E, rate_generic

LOGGER = logging.getLogger("protocol")

STOP_T_END = "t_end"
STOP_MAXIMAL = "maximal"
STOP_CROSSED = "crossed"

MAX_DT_FRACTION = 0.01
MAXIMAL_P_ATOL = 1e-9
MONOTONE_P_ATOL = 1e-14


class SteeringStepError(ValueError):
    """dt grande face a τ_H, p_start fora de (0, 1/2) ou sistema sem condução."""


class EvolutionRequestError(ValueError):
    """Passo, duração ou forma do estado inválidos para a evolução livre."""


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    p: float
    entanglement: float
    gamma: float
    residual_r: float
    residual_tau: float

    def as_row(self) -> Tuple[float, ...]:
        return (
            self.t,
            self.p,
            self.entanglement,
            self.gamma,
            self.residual_r,
            self.residual_tau,
        )


@dataclass(frozen=True)
class SteeringTrajectory:
    points: Tuple[TrajectoryPoint, ...]
    dt: float
    stop_reason: str
    max_reset_error: float

    @property
    def final(self) -> TrajectoryPoint:
        return self.points[-1]


@dataclass(frozen=True)
class EvolutionSample:
    t: float
    entanglement: float


def _locked_point(t: float, p: float, spec: InteractionSpec) -> TrajectoryPoint:
    state = psi_E(p)
    decomp = decompose(state)
    residual_r, residual_tau = check_conditions(decomp)
    return TrajectoryPoint(
        t=t,
        p=p,
        entanglement=entanglement(state),
        gamma=rate_generic(state, spec).gamma,
        residual_r=residual_r,
        residual_tau=residual_tau,
    )


def _validate(spec: InteractionSpec, p_start: float, dt: float, t_end: float) -> None:
    if spec.system != SYSTEM_TWO_QUBIT:
        raise SteeringStepError(
            f"condução só existe para dois qubits (sistema {spec.system})"
        )
    if spec.mu[0] + spec.mu[1] <= 0:
        raise SteeringStepError("μ1 + μ2 deve ser positivo para a família ψ_E(p)")
    if not 0.0 < p_start < 0.5:
        raise SteeringStepError(f"p_start fora de (0, 1/2) (p_start={p_start})")
    if t_end <= 0:
        raise SteeringStepError(f"t_end deve ser positivo (t_end={t_end})")
    limit = MAX_DT_FRACTION * timescale(spec)
    if not 0.0 < dt <= limit:
        raise SteeringStepError(
            f"dt={dt} fora de (0, {limit:.3e}] (0.01·τ_H para este Hamiltoniano)"
        )


def _step_count(dt: float, t_end: float) -> int:
    return int(np.floor(t_end / dt + 1e-9))


def steer(
    spec: InteractionSpec, p_start: float, dt: float, t_end: float
) -> SteeringTrajectory:
    _validate(spec, p_start, dt, t_end)
    propagator = evolution_operator(build_matrix(spec), dt)

    p = float(p_start)
    points: List[TrajectoryPoint] = [_locked_point(0.0, p, spec)]
    max_reset_error = 0.0
    stop_reason = STOP_T_END

    for step in range(1, _step_count(dt, t_end) + 1):
        evolved = PureState.normalized(spec.dims, propagator @ psi_E(p).amps)
        p_next = float(schmidt_decompose(evolved).weights[-1])
        if p_next < p - MONOTONE_P_ATOL:
            # o passo levou o peso para lá de 1/2
            stop_reason = STOP_CROSSED
            break

        reset_error = abs(entanglement(evolved) - entanglement(psi_E(p_next)))
        max_reset_error = max(max_reset_error, reset_error)
        p = p_next
        points.append(_locked_point(step * dt, p, spec))
        if p >= 0.5 - MAXIMAL_P_ATOL:
            stop_reason = STOP_MAXIMAL
            break

    LOGGER.info(
        "condução terminada (%s) em t=%.6g com p=%.9f após %d pontos",
        stop_reason,
        points[-1].t,
        points[-1].p,
        len(points),
    )
    return SteeringTrajectory(
        points=tuple(points),
        dt=dt,
        stop_reason=stop_reason,
        max_reset_error=max_reset_error,
    )


def free_evolution_trace(
    state: PureState, spec: InteractionSpec, dt: float, t_end: float
) -> Tuple[EvolutionSample, ...]:
    """E(t) sob evolução livre, sem reposições locais."""

    if dt <= 0 or t_end <= 0:
        raise EvolutionRequestError(
            f"dt e t_end devem ser positivos (dt={dt}, t_end={t_end})"
        )
    if tuple(state.dims) != spec.dims:
        raise EvolutionRequestError(
            f"estado com dims={state.dims} e Hamiltoniano {spec.system} incompatíveis"
        )
    propagator = evolution_operator(build_matrix(spec), dt)
    samples = [EvolutionSample(0.0, entanglement(state))]
    current = state
    for step in range(1, _step_count(dt, t_end) + 1):
        current = PureState.normalized(state.dims, propagator @ current.amps)
        samples.append(EvolutionSample(step * dt, entanglement(current)))
    return tuple(samples)
