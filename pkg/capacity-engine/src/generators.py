"""Geradores de SU(2)/SU(3) e constantes de estrutura calculadas por traços."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Sequence, Tuple

import numpy as np

GENERATOR_ATOL = 1e-12
SNAP_ATOL = 1e-12


class GeneratorError(ValueError):
    """Conjunto de geradores inválido ou operação fora do seu domínio."""


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    dim: int
    matrices: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise GeneratorError(f"apenas dim 2 ou 3 suportadas (dim={self.dim})")
        frozen = []
        for matrix in self.matrices:
            array = np.array(matrix, dtype=np.complex128)
            if array.shape != (self.dim, self.dim):
                raise GeneratorError(f"gerador com forma {array.shape} inválida")
            array.setflags(write=False)
            frozen.append(array)
        if len(frozen) != self.dim**2 - 1:
            raise GeneratorError(
                f"esperados {self.dim ** 2 - 1} geradores, recebidos {len(frozen)}"
            )
        object.__setattr__(self, "matrices", tuple(frozen))

    @classmethod
    def checked(cls, dim: int, matrices: Sequence[np.ndarray]) -> "GeneratorSet":
        generator_set = cls(dim, tuple(matrices))
        residual = generator_set.normalization_residual()
        if residual > GENERATOR_ATOL:
            raise GeneratorError(
                f"geradores fora de Tr(λiλj)=2δij (resíduo={residual:.3e})"
            )
        return generator_set

    def __len__(self) -> int:
        return len(self.matrices)

    def stack(self) -> np.ndarray:
        return np.stack(self.matrices)

    def normalization_residual(self) -> float:
        """Maior desvio de hermiticidade, traço nulo e ``Tr(λiλj) = 2δij``."""

        stack = self.stack()
        hermitian = np.max(np.abs(stack - np.conj(np.transpose(stack, (0, 2, 1)))))
        traces = np.max(np.abs(np.einsum("kii->k", stack)))
        gram = np.einsum("aij,bji->ab", stack, stack)
        orthogonality = np.max(np.abs(gram - 2.0 * np.eye(len(stack))))
        return float(max(hermitian, traces, orthogonality))


@dataclass(frozen=True, eq=False)
class StructureConstants:
    dim: int
    f: np.ndarray
    g: np.ndarray


def _outer(bra: int, ket: int, dim: int = 3) -> np.ndarray:
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    matrix[ket, bra] = 1.0
    return matrix


@lru_cache(maxsize=None)
def pauli_set() -> GeneratorSet:
    sigma_1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    sigma_2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
    sigma_3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    return GeneratorSet.checked(2, (sigma_1, sigma_2, sigma_3))


@lru_cache(maxsize=None)
def gell_mann_set() -> GeneratorSet:
    """λ1…λ8 na base |1⟩, |2⟩, |3⟩ (índices 0, 1, 2)."""

    def ket_bra(ket: int, bra: int) -> np.ndarray:
        return _outer(bra, ket)

    lambdas = (
        ket_bra(0, 1) + ket_bra(1, 0),
        -1j * (ket_bra(0, 1) - ket_bra(1, 0)),
        ket_bra(0, 0) - ket_bra(1, 1),
        ket_bra(0, 2) + ket_bra(2, 0),
        -1j * (ket_bra(0, 2) - ket_bra(2, 0)),
        ket_bra(1, 2) + ket_bra(2, 1),
        -1j * (ket_bra(1, 2) - ket_bra(2, 1)),
        (ket_bra(0, 0) + ket_bra(1, 1) - 2 * ket_bra(2, 2)) / np.sqrt(3.0),
    )
    return GeneratorSet.checked(3, lambdas)


def generator_set(dim: int) -> GeneratorSet:
    if dim == 2:
        return pauli_set()
    if dim == 3:
        return gell_mann_set()
    raise GeneratorError(f"sem geradores para dim={dim}")


def _snap(value: float) -> float:
    return 0.0 if abs(value) < SNAP_ATOL else value


def structure_constants(gen: GeneratorSet) -> StructureConstants:
    """``4i f_jkl = Tr([λj, λk] λl)`` e ``4 g_jkl = Tr({λj, λk} λl)``.

    Cada valor é calculado uma vez por multiconjunto de índices e copiado para
    as permutações, pelo que a (anti)simetria é exata.
    """

    stack = gen.stack()
    size = len(stack)
    f = np.zeros((size, size, size))
    g = np.zeros((size, size, size))

    for j, k, l in product(range(size), repeat=3):
        if not j <= k <= l:
            continue
        a, b, c = stack[j], stack[k], stack[l]
        f_value = _snap(float(np.real(np.trace((a @ b - b @ a) @ c) / 4j)))
        g_value = _snap(float(np.real(np.trace((a @ b + b @ a) @ c) / 4.0)))
        indices = (j, k, l)
        for perm in set(permutations(range(3))):
            target = tuple(indices[p] for p in perm)
            g[target] = g_value
            if len(set(indices)) == 3:
                f[target] = f_value * _permutation_sign(perm)

    return StructureConstants(dim=gen.dim, f=f, g=g)


def _permutation_sign(perm: Tuple[int, ...]) -> int:
    sign = 1
    items = list(perm)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def cached_structure_constants(dim: int) -> StructureConstants:
    return structure_constants(generator_set(dim))


def levi_civita() -> np.ndarray:
    return cached_structure_constants(2).f


def verify_product_identity(gen: GeneratorSet, sc: StructureConstants) -> float:
    """Resíduo de ``λiλj = (2/3)δij I + (i f_ijk + g_ijk) λk`` (apenas SU(3))."""

    if gen.dim != 3 or sc.dim != 3:
        raise GeneratorError("identidade de produto definida apenas para dim 3")
    stack = gen.stack()
    identity = np.eye(3)
    worst = 0.0
    for i, j in product(range(len(stack)), repeat=2):
        expected = (2.0 / 3.0) * (i == j) * identity + np.einsum(
            "k,kab->ab", 1j * sc.f[i, j] + sc.g[i, j], stack
        )
        worst = max(worst, float(np.max(np.abs(stack[i] @ stack[j] - expected))))
    return worst


def jacobi_residual(sc: StructureConstants) -> float:
    """Maior violação da identidade de Jacobi sobre todos os tripletos."""

    f = sc.f
    total = (
        np.einsum("ijm,mkl->ijkl", f, f)
        + np.einsum("jkm,mil->ijkl", f, f)
        + np.einsum("kim,mjl->ijkl", f, f)
    )
    return float(np.max(np.abs(total)))
