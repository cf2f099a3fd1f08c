"""Decomposição de Bloch de estados puros e medida de emaranhamento ‖T‖ − c.

Formas suportadas: dois qubits (2, 2), dois qutrits (3, 3) e três qubits
(2, 2, 2). Para qutrits o tensor de correlação usa a escala
``τ_kl = (9/4)⟨λk ⊗ λl⟩``, que anula a medida em estados produto; a
reconstrução de ρ usa o coeficiente compatível com essa escala (1/9, não 9/4·1/9).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Tuple, Union

import numpy as np

from generators import generator_set
from numeric_core import PureState, kron_all

SHAPE_TWO_QUBIT: Tuple[int, ...] = (2, 2)
SHAPE_TWO_QUTRIT: Tuple[int, ...] = (3, 3)
SHAPE_THREE_QUBIT: Tuple[int, ...] = (2, 2, 2)
SUPPORTED_SHAPES = (SHAPE_TWO_QUBIT, SHAPE_TWO_QUTRIT, SHAPE_THREE_QUBIT)

QUTRIT_CORRELATION_SCALE = 9.0 / 4.0
NEGATIVE_ENTANGLEMENT_ATOL = 1e-8


class UnsupportedShapeError(ValueError):
    """Forma de sistema fora das três suportadas."""


class NegativeEntanglementError(RuntimeError):
    """‖T‖ abaixo do valor de estado produto para além do arredondamento."""


@dataclass(frozen=True, eq=False)
class CorrelationModel:
    """Operadores de correlação de ordem máxima para uma forma de sistema."""

    shape: Tuple[int, ...]
    operators: np.ndarray
    scale: float
    offset: float
    tensor_shape: Tuple[int, ...]


def _require_shape(dims: Tuple[int, ...]) -> Tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if dims not in SUPPORTED_SHAPES:
        raise UnsupportedShapeError(
            f"forma {dims} não suportada; use (2, 2), (3, 3) ou (2, 2, 2)"
        )
    return dims


def _local_operator(dims: Tuple[int, ...], slots: Dict[int, np.ndarray]) -> np.ndarray:
    factors = [slots.get(i, np.eye(d)) for i, d in enumerate(dims)]
    return kron_all(*factors)


@lru_cache(maxsize=None)
def _operator_table(
    dims: Tuple[int, ...], parties: Tuple[int, ...]
) -> np.ndarray:
    generators = [generator_set(dims[p]).matrices for p in parties]
    operators: List[np.ndarray] = []
    for combo in product(*generators):
        operators.append(_local_operator(dims, dict(zip(parties, combo))))
    table = np.stack(operators)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def correlation_model(dims: Tuple[int, ...]) -> CorrelationModel:
    dims = _require_shape(dims)
    parties = tuple(range(len(dims)))
    operators = _operator_table(dims, parties)
    size = dims[0] ** 2 - 1
    if dims == SHAPE_TWO_QUTRIT:
        scale, offset = QUTRIT_CORRELATION_SCALE, 3.0
    else:
        scale, offset = 1.0, 1.0
    return CorrelationModel(
        shape=dims,
        operators=operators,
        scale=scale,
        offset=offset,
        tensor_shape=(size,) * len(dims),
    )


def expectations(state: PureState, operators: np.ndarray) -> np.ndarray:
    """⟨ψ|A_k|ψ⟩ para uma pilha de operadores Hermíticos."""

    psi = state.amps
    return np.real(np.einsum("i,kij,j->k", psi.conj(), operators, psi))


def _expect(state: PureState, parties: Tuple[int, ...]) -> np.ndarray:
    values = expectations(state, _operator_table(state.dims, parties))
    size = state.dims[0] ** 2 - 1
    return values.reshape((size,) * len(parties))


@dataclass(frozen=True, eq=False)
class BlochDecomposition2Q:
    r: np.ndarray
    s: np.ndarray
    T: np.ndarray

    shape = SHAPE_TWO_QUBIT
    offset = 1.0

    @property
    def correlation_norm(self) -> float:
        return float(np.linalg.norm(self.T))

    def to_dict(self) -> Dict[str, object]:
        return {"r": self.r.tolist(), "s": self.s.tolist(), "T": self.T.tolist()}


@dataclass(frozen=True, eq=False)
class BlochDecomposition2Qutrit:
    lam_a: np.ndarray
    lam_b: np.ndarray
    T: np.ndarray

    shape = SHAPE_TWO_QUTRIT
    offset = 3.0

    @property
    def correlation_norm(self) -> float:
        return float(np.linalg.norm(self.T))

    def to_dict(self) -> Dict[str, object]:
        return {
            "lambda_A": self.lam_a.tolist(),
            "lambda_B": self.lam_b.tolist(),
            "T": self.T.tolist(),
        }


@dataclass(frozen=True, eq=False)
class BlochDecomposition3Q:
    r: np.ndarray
    s: np.ndarray
    q: np.ndarray
    t_ab: np.ndarray
    t_ac: np.ndarray
    t_bc: np.ndarray
    tau: np.ndarray

    shape = SHAPE_THREE_QUBIT
    offset = 1.0

    @property
    def correlation_norm(self) -> float:
        return float(np.linalg.norm(self.tau))

    def to_dict(self) -> Dict[str, object]:
        return {
            "r": self.r.tolist(),
            "s": self.s.tolist(),
            "q": self.q.tolist(),
            "t_AB": self.t_ab.tolist(),
            "t_AC": self.t_ac.tolist(),
            "t_BC": self.t_bc.tolist(),
            "tau": self.tau.tolist(),
        }


BlochDecomposition = Union[
    BlochDecomposition2Q, BlochDecomposition2Qutrit, BlochDecomposition3Q
]


def decompose(state: PureState) -> BlochDecomposition:
    dims = _require_shape(state.dims)
    if dims == SHAPE_TWO_QUBIT:
        return BlochDecomposition2Q(
            r=_expect(state, (0,)), s=_expect(state, (1,)), T=_expect(state, (0, 1))
        )
    if dims == SHAPE_TWO_QUTRIT:
        return BlochDecomposition2Qutrit(
            lam_a=_expect(state, (0,)),
            lam_b=_expect(state, (1,)),
            T=QUTRIT_CORRELATION_SCALE * _expect(state, (0, 1)),
        )
    return BlochDecomposition3Q(
        r=_expect(state, (0,)),
        s=_expect(state, (1,)),
        q=_expect(state, (2,)),
        t_ab=_expect(state, (0, 1)),
        t_ac=_expect(state, (0, 2)),
        t_bc=_expect(state, (1, 2)),
        tau=_expect(state, (0, 1, 2)),
    )


def entanglement_from_norm(norm: float, offset: float) -> float:
    value = norm - offset
    if value < 0:
        if value < -NEGATIVE_ENTANGLEMENT_ATOL:
            raise NegativeEntanglementError(
                f"‖T‖={norm:.12g} abaixo do valor de estado produto {offset}"
            )
        return 0.0
    return value


def entanglement(state: PureState) -> float:
    """E = ‖T‖ − 1 (qubits) ou ‖T‖ − 3 (dois qutrits)."""

    model = correlation_model(state.dims)
    tensor = model.scale * expectations(state, model.operators)
    return entanglement_from_norm(float(np.linalg.norm(tensor)), model.offset)


def reconstruct_density(decomp: BlochDecomposition) -> np.ndarray:
    if isinstance(decomp, BlochDecomposition2Q):
        dims = SHAPE_TWO_QUBIT
        rho = np.eye(4, dtype=np.complex128)
        rho = rho + np.einsum("k,kij->ij", decomp.r, _operator_table(dims, (0,)))
        rho = rho + np.einsum("k,kij->ij", decomp.s, _operator_table(dims, (1,)))
        rho = rho + np.einsum(
            "k,kij->ij", decomp.T.ravel(), _operator_table(dims, (0, 1))
        )
        return rho / 4.0
    if isinstance(decomp, BlochDecomposition2Qutrit):
        dims = SHAPE_TWO_QUTRIT
        rho = np.eye(9, dtype=np.complex128)
        rho = rho + 1.5 * np.einsum(
            "k,kij->ij", decomp.lam_a, _operator_table(dims, (0,))
        )
        rho = rho + 1.5 * np.einsum(
            "k,kij->ij", decomp.lam_b, _operator_table(dims, (1,))
        )
        rho = rho + np.einsum(
            "k,kij->ij", decomp.T.ravel(), _operator_table(dims, (0, 1))
        )
        return rho / 9.0
    if isinstance(decomp, BlochDecomposition3Q):
        dims = SHAPE_THREE_QUBIT
        terms = (
            (decomp.r, (0,)),
            (decomp.s, (1,)),
            (decomp.q, (2,)),
            (decomp.t_ab, (0, 1)),
            (decomp.t_ac, (0, 2)),
            (decomp.t_bc, (1, 2)),
            (decomp.tau, (0, 1, 2)),
        )
        rho = np.eye(8, dtype=np.complex128)
        for coefficients, parties in terms:
            rho = rho + np.einsum(
                "k,kij->ij", coefficients.ravel(), _operator_table(dims, parties)
            )
        return rho / 8.0
    raise UnsupportedShapeError(f"decomposição desconhecida: {type(decomp).__name__}")
