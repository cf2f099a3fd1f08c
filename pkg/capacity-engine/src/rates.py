"""Taxa de geração de emaranhamento Γ = dE/dt.

Três vias independentes: a fórmula genérica ``τ̇ = i Tr(H [A, ρ])`` avaliada
com matrizes densas, as formas fechadas por sistema e a diferença central
de ``E(e^{-iHt}ψ)``. Inclui ainda a família ótima de dois qubits ψ_E(p) e as
curvas f(p) / f_VN(p).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2, sqrt
from typing import Dict, Optional, Tuple

import numpy as np

from bloch import (
    SHAPE_TWO_QUBIT,
    BlochDecomposition2Q,
    BlochDecomposition2Qutrit,
    BlochDecomposition3Q,
    correlation_model,
    decompose,
    entanglement,
)
from generators import StructureConstants, cached_structure_constants, levi_civita
from hamiltonians import (
    SYSTEM_THREE_QUBIT,
    SYSTEM_TWO_QUBIT,
    SYSTEM_TWO_QUTRIT,
    InteractionSpec,
    build_matrix,
)
from numeric_core import PureState, evolve

METHOD_GENERIC = "generic"
METHOD_CLOSED = "closed_form"
METHOD_FINITE_DIFFERENCE = "finite_difference"

DEFAULT_FD_STEP = 1e-5
CONDITION_ATOL = 1e-6
ZERO_NORM_ATOL = 1e-12


class ShapeMismatchError(ValueError):
    """Estado e Hamiltoniano com formas diferentes."""


class OptimalityConditionError(ValueError):
    """Estado fora das condições r3 = −s3 e τ12 = −τ21."""


class ParameterRangeError(ValueError):
    """Parâmetro (p, dt) fora do domínio."""


class ZeroCorrelationError(RuntimeError):
    """‖T‖ = 0, impossível para estados puros das formas suportadas."""


@dataclass(frozen=True)
class RateReport:
    gamma: float
    method: str
    breakdown: Optional[Dict[str, float]] = None

    def to_dict(self) -> Dict[str, object]:
        payload: Dict[str, object] = {"gamma": self.gamma, "method": self.method}
        if self.breakdown is not None:
            payload["breakdown"] = dict(self.breakdown)
        return payload


def _check_shapes(state: PureState, spec: InteractionSpec) -> None:
    if tuple(state.dims) != spec.dims:
        raise ShapeMismatchError(
            f"estado com dims={state.dims} e Hamiltoniano {spec.system} incompatíveis"
        )


def _gamma_from_tensors(tau: np.ndarray, tau_dot: np.ndarray) -> float:
    norm = float(np.linalg.norm(tau))
    if norm <= ZERO_NORM_ATOL:
        raise ZeroCorrelationError("tensor de correlação nulo")
    return float(np.sum(tau * tau_dot)) / norm


def rate_generic(state: PureState, spec: InteractionSpec) -> RateReport:
    _check_shapes(state, spec)
    model = correlation_model(state.dims)
    h = build_matrix(spec)
    rho = state.density()
    operators = model.operators
    commutators = operators @ rho - rho @ operators
    tau = model.scale * np.real(np.einsum("kij,ji->k", operators, rho))
    tau_dot = model.scale * np.real(1j * np.einsum("ij,kji->k", h, commutators))
    return RateReport(_gamma_from_tensors(tau, tau_dot), METHOD_GENERIC)


def rate_finite_difference(
    state: PureState, spec: InteractionSpec, dt: float = DEFAULT_FD_STEP
) -> RateReport:
    if dt <= 0:
        raise ParameterRangeError(f"dt deve ser positivo (dt={dt})")
    _check_shapes(state, spec)
    h = build_matrix(spec)
    forward = entanglement(evolve(state, h, dt))
    backward = entanglement(evolve(state, h, -dt))
    return RateReport((forward - backward) / (2.0 * dt), METHOD_FINITE_DIFFERENCE)


def rate_two_qubit_closed(
    decomp: BlochDecomposition2Q, spec: InteractionSpec
) -> RateReport:
    """Γ = (2/‖T‖) Σ_n [(r × τ_:n)_n + (s × τ_n:)_n] μ_n."""

    if spec.system != SYSTEM_TWO_QUBIT:
        raise ShapeMismatchError("forma fechada de dois qubits requer sistema 2x2")
    norm = decomp.correlation_norm
    if norm <= ZERO_NORM_ATOL:
        raise ZeroCorrelationError("tensor de correlação nulo")
    breakdown: Dict[str, float] = {}
    for n, (label, mu) in enumerate(spec.coupling_items()):
        column = np.cross(decomp.r, decomp.T[:, n])[n]
        row = np.cross(decomp.s, decomp.T[n, :])[n]
        breakdown[label] = 2.0 * (column + row) * mu / norm
    return RateReport(float(sum(breakdown.values())), METHOD_CLOSED, breakdown)


def rate_two_qutrit_closed(
    decomp: BlochDecomposition2Qutrit,
    spec: InteractionSpec,
    sc: Optional[StructureConstants] = None,
) -> RateReport:
    """Γ = −3 (1/‖T‖) Σ μ_p f_klp (τ_kp Λ^A_l + τ_pk Λ^B_l)."""

    if spec.system != SYSTEM_TWO_QUTRIT:
        raise ShapeMismatchError("forma fechada de dois qutrits requer sistema 3x3")
    sc = sc or cached_structure_constants(3)
    norm = decomp.correlation_norm
    if norm <= ZERO_NORM_ATOL:
        raise ZeroCorrelationError("tensor de correlação nulo")
    T = decomp.T
    per_p = np.einsum("klp,kp,l->p", sc.f, T, decomp.lam_a) + np.einsum(
        "klp,pk,l->p", sc.f, T, decomp.lam_b
    )
    breakdown = {
        label: float(-3.0 * mu * per_p[p] / norm)
        for p, (label, mu) in enumerate(spec.coupling_items())
    }
    return RateReport(float(sum(breakdown.values())), METHOD_CLOSED, breakdown)


def _cross_component(u: np.ndarray, v: np.ndarray, s: int) -> float:
    """(u × v)_s = ε_sij u_i v_j."""

    return float(np.einsum("ij,i,j->", levi_civita()[s], u, v))


def rate_three_qubit_closed(
    decomp: BlochDecomposition3Q, spec: InteractionSpec
) -> RateReport:
    """Forma com produtos vetoriais de fatias de τ contra linhas/colunas de t.

    ``tau[i, j, k] = ⟨σi ⊗ σj ⊗ σk⟩`` na ordem de partes A, B, C.
    """

    if spec.system != SYSTEM_THREE_QUBIT:
        raise ShapeMismatchError("forma fechada de três qubits requer sistema 2x2x2")
    norm = decomp.correlation_norm
    if norm <= ZERO_NORM_ATOL:
        raise ZeroCorrelationError("tensor de correlação nulo")
    tau, t_ab, t_ac, t_bc = decomp.tau, decomp.t_ab, decomp.t_ac, decomp.t_bc

    breakdown: Dict[str, float] = {}
    for s in range(3):
        ab = sum(
            _cross_component(tau[:, s, k], t_ac[:, k], s)
            + _cross_component(tau[s, :, k], t_bc[:, k], s)
            for k in range(3)
        )
        bc = sum(
            _cross_component(tau[i, :, s], t_ab[i, :], s)
            + _cross_component(tau[i, s, :], t_ac[i, :], s)
            for i in range(3)
        )
        ac = sum(
            _cross_component(tau[:, j, s], t_ab[:, j], s)
            + _cross_component(tau[s, j, :], t_bc[j, :], s)
            for j in range(3)
        )
        breakdown[f"ab{s + 1}"] = -2.0 * spec.mu_ab[s] * ab / norm
        breakdown[f"bc{s + 1}"] = -2.0 * spec.mu_bc[s] * bc / norm
        breakdown[f"ac{s + 1}"] = -2.0 * spec.mu_ac[s] * ac / norm
    ordered = {label: breakdown[label] for label, _ in spec.coupling_items()}
    return RateReport(float(sum(ordered.values())), METHOD_CLOSED, ordered)


def rate_closed_form(state: PureState, spec: InteractionSpec) -> RateReport:
    _check_shapes(state, spec)
    decomp = decompose(state)
    if spec.system == SYSTEM_TWO_QUBIT:
        return rate_two_qubit_closed(decomp, spec)
    if spec.system == SYSTEM_TWO_QUTRIT:
        return rate_two_qutrit_closed(decomp, spec)
    return rate_three_qubit_closed(decomp, spec)


def check_conditions(decomp: BlochDecomposition2Q) -> Tuple[float, float]:
    """Resíduos (|r3 + s3|, |τ12 + τ21|), mensuráveis in situ."""

    if not isinstance(decomp, BlochDecomposition2Q):
        raise ShapeMismatchError("condições de otimalidade definidas para 2x2")
    return (
        float(abs(decomp.r[2] + decomp.s[2])),
        float(abs(decomp.T[0, 1] + decomp.T[1, 0])),
    )


def psi_E(p: float) -> PureState:
    """√p|01⟩ + i√(1−p)|10⟩."""

    if not 0.0 <= p <= 1.0:
        raise ParameterRangeError(f"p fora de [0, 1] (p={p})")
    amps = np.zeros(4, dtype=np.complex128)
    amps[1] = sqrt(p)
    amps[2] = 1j * sqrt(1.0 - p)
    return PureState.normalized(SHAPE_TWO_QUBIT, amps)


def rate_locked(
    p: float,
    mu1: float,
    mu2: float,
    state_decomp: Optional[BlochDecomposition2Q] = None,
) -> float:
    """Γ_E = (4/‖T‖) r3 τ12 (μ1 + μ2) sobre a família ótima."""

    if not 0.0 < p < 1.0:
        raise ParameterRangeError(f"p fora de (0, 1) (p={p})")
    decomp = state_decomp if state_decomp is not None else decompose(psi_E(p))
    residual_r, residual_tau = check_conditions(decomp)
    if residual_r > CONDITION_ATOL or residual_tau > CONDITION_ATOL:
        raise OptimalityConditionError(
            f"condições violadas: |r3+s3|={residual_r:.3e}, "
            f"|τ12+τ21|={residual_tau:.3e}"
        )
    norm = decomp.correlation_norm
    return 4.0 * decomp.r[2] * decomp.T[0, 1] * (mu1 + mu2) / norm


def tensor_measure(p: float) -> float:
    """E(ψ_E(p)) = √(1 + 8p(1−p)) − 1."""

    return sqrt(1.0 + 8.0 * p * (1.0 - p)) - 1.0


def tensor_measure_derivative(p: float) -> float:
    return 4.0 * (1.0 - 2.0 * p) / sqrt(1.0 + 8.0 * p * (1.0 - p))


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * log2(p) - (1.0 - p) * log2(1.0 - p)


def binary_entropy_derivative(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ParameterRangeError(f"dE_VN/dp singular em p={p}")
    return log2((1.0 - p) / p)


def f_curve(p: float) -> float:
    """f(p) = 2√(p(1−p))·dE/dp = 8(1−2p)√(p(1−p)) / √(1 + 8p(1−p))."""

    if not 0.0 <= p <= 1.0:
        raise ParameterRangeError(f"p fora de [0, 1] (p={p})")
    return 2.0 * sqrt(p * (1.0 - p)) * tensor_measure_derivative(p)


def f_vn_curve(p: float) -> float:
    """f(p)·(dE_VN/dp)/(dE/dp), em ebits.

    O fator (1 − 2p) comum a f e dE/dp cancela-se: resta
    2√(p(1−p))·log2((1−p)/p), finito em p = 1/2.
    """

    if not 0.0 < p < 1.0:
        raise ParameterRangeError(f"f_VN indefinida nas extremidades (p={p})")
    return 2.0 * sqrt(p * (1.0 - p)) * binary_entropy_derivative(p)


def compute_rate(
    state: PureState,
    spec: InteractionSpec,
    method: str = METHOD_GENERIC,
    *,
    dt: float = DEFAULT_FD_STEP,
) -> RateReport:
    if method == METHOD_GENERIC:
        return rate_generic(state, spec)
    if method == METHOD_CLOSED:
        return rate_closed_form(state, spec)
    if method == METHOD_FINITE_DIFFERENCE:
        return rate_finite_difference(state, spec, dt)
    raise ValueError(f"método desconhecido: {method}")


class RateObjective:
    """Γ vetorizado sobre lotes de amplitudes, para o otimizador.

    Pré-calcula ``B_k = i[H, A_k]`` para que ``τ̇_k = ⟨ψ|B_k|ψ⟩``; cada lote
    é normalizado linha a linha, pelo que Γ fica definido na esfera unitária.
    """

    def __init__(self, spec: InteractionSpec) -> None:
        model = correlation_model(spec.dims)
        h = build_matrix(spec)
        operators = model.operators
        derivatives = 1j * (h @ operators - operators @ h)
        stacked = np.concatenate([operators, derivatives])
        self.spec = spec
        self.dimension = h.shape[0]
        self._count = len(operators)
        self._scale = model.scale
        self._flat = stacked.reshape(-1, self.dimension)

    def values(self, batch: np.ndarray) -> np.ndarray:
        batch = np.atleast_2d(np.asarray(batch, dtype=np.complex128))
        batch = batch / np.linalg.norm(batch, axis=1, keepdims=True)
        applied = (self._flat @ batch.T).reshape(-1, self.dimension, len(batch))
        moments = np.real(np.einsum("mi,kim->mk", batch.conj(), applied))
        moments *= self._scale
        tau = moments[:, : self._count]
        tau_dot = moments[:, self._count :]
        norms = np.linalg.norm(tau, axis=1)
        return np.sum(tau * tau_dot, axis=1) / norms

    def __call__(self, amps: np.ndarray) -> float:
        return float(self.values(amps)[0])
