"""Álgebra linear densa para espaços de Hilbert pequenos (dimensão ≤ 9)."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence, Tuple

import numpy as np
import scipy.linalg

HERMITIAN_ATOL = 1e-10
NORM_ATOL = 1e-10
SCHMIDT_TIE_ATOL = 1e-12


class DimensionError(ValueError):
    """Operandos com dimensões incompatíveis ou subsistemas inválidos."""


class HermiticityError(ValueError):
    """Matriz declarada Hermítica que não o é dentro da tolerância."""


def _as_dims(dims: Iterable[int]) -> Tuple[int, ...]:
    values = tuple(int(d) for d in dims)
    if not values:
        raise DimensionError("lista de dimensões vazia")
    if any(d < 2 for d in values):
        raise DimensionError(f"cada subsistema precisa de dimensão >= 2: {values}")
    return values


@dataclass(frozen=True, eq=False)
class PureState:
    """Estado puro na base produto; o primeiro subsistema é o mais significativo."""

    dims: Tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self) -> None:
        dims = _as_dims(self.dims)
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != prod(dims):
            raise DimensionError(
                f"esperadas {prod(dims)} amplitudes para dims={dims}, "
                f"recebidas {amps.size}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_ATOL:
            raise DimensionError(f"estado não normalizado (norma={norm:.12g})")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def normalized(cls, dims: Sequence[int], amps: Sequence[complex]) -> "PureState":
        vector = np.asarray(amps, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise DimensionError("vetor nulo não representa um estado")
        return cls(tuple(dims), vector / norm)

    @classmethod
    def basis(cls, dims: Sequence[int], index: int) -> "PureState":
        vector = np.zeros(prod(dims), dtype=np.complex128)
        vector[index] = 1.0
        return cls(tuple(dims), vector)

    @property
    def dimension(self) -> int:
        return self.amps.size

    def density(self) -> np.ndarray:
        return np.outer(self.amps, self.amps.conj())

    def expectation(self, operator: np.ndarray) -> float:
        return float(np.real(np.vdot(self.amps, operator @ self.amps)))

    def canonical(self) -> "PureState":
        return PureState(self.dims, canonical_phase(self.amps))


def canonical_phase(amps: np.ndarray) -> np.ndarray:
    """Fixa a fase global: a amplitude de maior módulo fica real positiva."""

    vector = np.asarray(amps, dtype=np.complex128)
    pivot = vector[int(np.argmax(np.abs(vector)))]
    if pivot == 0:
        return vector.copy()
    return vector * (abs(pivot) / pivot)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(*factors: np.ndarray) -> np.ndarray:
    if not factors:
        raise DimensionError("kron_all precisa de pelo menos um fator")
    result = np.asarray(factors[0], dtype=np.complex128)
    for factor in factors[1:]:
        result = np.kron(result, factor)
    return result


def _check_square_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise DimensionError(
            f"operandos quadrados de igual dimensão esperados: {a.shape} vs {b.shape}"
        )


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    _check_square_pair(a, b)
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    _check_square_pair(a, b)
    return a @ b + b @ a


def ensure_hermitian(matrix: np.ndarray, *, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"matriz quadrada esperada, recebida {matrix.shape}")
    deviation = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
    if deviation > atol:
        raise HermiticityError(f"matriz não Hermítica (desvio={deviation:.3e})")
    return matrix


def evolution_operator(h: np.ndarray, t: float) -> np.ndarray:
    """``exp(-i h t)`` pela decomposição espectral de ``h`` (ħ = 1)."""

    h = ensure_hermitian(h)
    eigenvalues, eigenvectors = scipy.linalg.eigh(h)
    phases = np.exp(-1j * eigenvalues * float(t))
    return (eigenvectors * phases) @ eigenvectors.conj().T


def evolve(state: PureState, h: np.ndarray, t: float) -> PureState:
    h = np.asarray(h)
    if h.shape != (state.dimension, state.dimension):
        raise DimensionError(
            f"Hamiltoniano {h.shape} incompatível com estado de dimensão "
            f"{state.dimension}"
        )
    amps = evolution_operator(h, t) @ state.amps
    # re-normaliza o arredondamento acumulado (<1e-14 nestas dimensões)
    return PureState(state.dims, amps / np.linalg.norm(amps))


def partial_trace(
    rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]
) -> np.ndarray:
    dims = _as_dims(dims)
    total = prod(dims)
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (total, total):
        raise DimensionError(f"rho {rho.shape} incompatível com dims={dims}")
    kept = sorted(set(int(k) for k in keep))
    if not kept or any(k < 0 or k >= len(dims) for k in kept):
        raise DimensionError(f"conjunto de subsistemas inválido: {kept}")

    n = len(dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for index in range(n):
        if index not in kept:
            col[index] = row[index]
    out = "".join(row[k] for k in kept) + "".join(col[k] for k in kept)
    expression = "".join(row) + "".join(col) + "->" + out
    reduced = np.einsum(expression, rho.reshape(dims + dims))
    size = prod(dims[k] for k in kept)
    return reduced.reshape(size, size)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def weights(self) -> np.ndarray:
        return self.coefficients**2

    def reconstruct(self) -> np.ndarray:
        return np.einsum("k,ik,jk->ij", self.coefficients, self.left, self.right)


def _column_key(column: np.ndarray) -> Tuple[float, ...]:
    fixed = canonical_phase(column)
    return tuple(np.round(np.column_stack([fixed.real, fixed.imag]).ravel(), 12))


def schmidt_decompose(state: PureState) -> SchmidtDecomposition:
    if len(state.dims) != 2:
        raise DimensionError(
            f"decomposição de Schmidt requer estado bipartido, dims={state.dims}"
        )
    d_a, d_b = state.dims
    matrix = state.amps.reshape(d_a, d_b)
    u, singular, vh = np.linalg.svd(matrix)
    rank = min(d_a, d_b)
    coefficients = singular[:rank]
    left = u[:, :rank]
    right = vh[:rank, :].T

    order = list(range(rank))
    start = 0
    while start < rank:
        stop = start + 1
        while (
            stop < rank
            and abs(coefficients[stop] - coefficients[start]) <= SCHMIDT_TIE_ATOL
        ):
            stop += 1
        if stop - start > 1:
            block = sorted(order[start:stop], key=lambda k: _column_key(left[:, k]))
            order[start:stop] = block
        start = stop

    return SchmidtDecomposition(
        coefficients=np.array(coefficients[order]),
        left=np.array(left[:, order]),
        right=np.array(right[:, order]),
    )


def random_amplitudes(dimension: int, rng: np.random.Generator) -> np.ndarray:
    vector = rng.standard_normal(dimension) + 1j * rng.standard_normal(dimension)
    return vector / np.linalg.norm(vector)


def random_state(dims: Sequence[int], seed: int) -> PureState:
    """Estado de Haar: amplitudes Gaussianas complexas normalizadas."""

    dims = _as_dims(dims)
    rng = np.random.default_rng(seed)
    return PureState(dims, random_amplitudes(prod(dims), rng))
