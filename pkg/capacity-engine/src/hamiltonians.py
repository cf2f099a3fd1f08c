"""Hamiltonianos de interação na forma diagonal e a sua escala temporal."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from bloch import SHAPE_THREE_QUBIT, SHAPE_TWO_QUBIT, SHAPE_TWO_QUTRIT
from generators import gell_mann_set, pauli_set
from numeric_core import kron_all

SYSTEM_TWO_QUBIT = "2x2"
SYSTEM_TWO_QUTRIT = "3x3"
SYSTEM_THREE_QUBIT = "2x2x2"

SYSTEM_DIMS: Dict[str, Tuple[int, ...]] = {
    SYSTEM_TWO_QUBIT: SHAPE_TWO_QUBIT,
    SYSTEM_TWO_QUTRIT: SHAPE_TWO_QUTRIT,
    SYSTEM_THREE_QUBIT: SHAPE_THREE_QUBIT,
}
# ordem dos pares em H = H_AB + H_BC + H_AC
PAIR_ORDER: Tuple[str, ...] = ("ab", "bc", "ac")
PAIR_PARTIES: Dict[str, Tuple[int, int]] = {"ab": (0, 1), "bc": (1, 2), "ac": (0, 2)}
DEGENERATE_SPREAD_ATOL = 1e-12


class CouplingSpecError(ValueError):
    """Sistema desconhecido ou número de acoplamentos errado."""


class CouplingOrderError(ValueError):
    """Acoplamentos fora da ordem não crescente convencionada."""


class DegenerateHamiltonianError(ValueError):
    """Hamiltoniano nulo: e_max = e_min."""


def _as_couplings(values: Optional[Sequence[float]], size: int, label: str):
    if values is None:
        raise CouplingSpecError(f"acoplamentos '{label}' em falta")
    couplings = tuple(float(v) for v in values)
    if len(couplings) != size:
        raise CouplingSpecError(
            f"'{label}' precisa de {size} valores, recebidos {len(couplings)}"
        )
    return couplings


def _is_non_increasing(values: Tuple[float, ...]) -> bool:
    return all(a >= b for a, b in zip(values, values[1:]))


@dataclass(frozen=True)
class InteractionSpec:
    system: str
    mu: Tuple[float, ...] = ()
    mu_ab: Tuple[float, ...] = ()
    mu_bc: Tuple[float, ...] = ()
    mu_ac: Tuple[float, ...] = ()
    allow_unordered: bool = False

    def __post_init__(self) -> None:
        if self.system not in SYSTEM_DIMS:
            raise CouplingSpecError(
                f"sistema '{self.system}' desconhecido; use 2x2, 3x3 ou 2x2x2"
            )
        if self.system == SYSTEM_THREE_QUBIT:
            for label in ("mu_ab", "mu_bc", "mu_ac"):
                object.__setattr__(
                    self, label, _as_couplings(getattr(self, label), 3, label)
                )
            object.__setattr__(self, "mu", ())
            groups = {label: getattr(self, f"mu_{label}") for label in PAIR_ORDER}
        else:
            size = 3 if self.system == SYSTEM_TWO_QUBIT else 8
            object.__setattr__(self, "mu", _as_couplings(self.mu, size, "mu"))
            groups = {"mu": self.mu}

        if self.allow_unordered:
            return
        for label, values in groups.items():
            if not _is_non_increasing(values):
                raise CouplingOrderError(
                    f"acoplamentos '{label}'={values} devem ser não crescentes "
                    "(use allow_unordered para explorar outras ordens)"
                )

    @classmethod
    def two_qubit(cls, mu: Sequence[float], **kwargs) -> "InteractionSpec":
        return cls(SYSTEM_TWO_QUBIT, mu=tuple(mu), **kwargs)

    @classmethod
    def two_qutrit(cls, mu: Sequence[float], **kwargs) -> "InteractionSpec":
        return cls(SYSTEM_TWO_QUTRIT, mu=tuple(mu), **kwargs)

    @classmethod
    def three_qubit(
        cls,
        mu_ab: Sequence[float],
        mu_bc: Sequence[float],
        mu_ac: Sequence[float],
        **kwargs,
    ) -> "InteractionSpec":
        return cls(
            SYSTEM_THREE_QUBIT,
            mu_ab=tuple(mu_ab),
            mu_bc=tuple(mu_bc),
            mu_ac=tuple(mu_ac),
            **kwargs,
        )

    @classmethod
    def isotropic(cls, system: str, strength: float = 1.0) -> "InteractionSpec":
        if system == SYSTEM_THREE_QUBIT:
            pair = (float(strength),) * 3
            return cls.three_qubit(pair, pair, pair)
        if system not in SYSTEM_DIMS:
            raise CouplingSpecError(f"sistema '{system}' desconhecido")
        size = 3 if system == SYSTEM_TWO_QUBIT else 8
        return cls(system, mu=(float(strength),) * size)

    @property
    def dims(self) -> Tuple[int, ...]:
        return SYSTEM_DIMS[self.system]

    def coupling_items(self) -> Tuple[Tuple[str, float], ...]:
        """Pares (rótulo, μ) na ordem usada pelas decomposições por termo."""

        if self.system == SYSTEM_THREE_QUBIT:
            return tuple(
                (f"{pair}{n + 1}", value)
                for pair in PAIR_ORDER
                for n, value in enumerate(getattr(self, f"mu_{pair}"))
            )
        return tuple((f"mu{n + 1}", value) for n, value in enumerate(self.mu))

    def scaled(self, factor: float) -> "InteractionSpec":
        factor = float(factor)
        if self.system == SYSTEM_THREE_QUBIT:
            return replace(
                self,
                mu_ab=tuple(factor * v for v in self.mu_ab),
                mu_bc=tuple(factor * v for v in self.mu_bc),
                mu_ac=tuple(factor * v for v in self.mu_ac),
                allow_unordered=self.allow_unordered or factor < 0,
            )
        return replace(
            self,
            mu=tuple(factor * v for v in self.mu),
            allow_unordered=self.allow_unordered or factor < 0,
        )

    def to_dict(self) -> Dict[str, object]:
        if self.system == SYSTEM_THREE_QUBIT:
            return {
                "system": self.system,
                "mu_ab": list(self.mu_ab),
                "mu_bc": list(self.mu_bc),
                "mu_ac": list(self.mu_ac),
            }
        return {"system": self.system, "mu": list(self.mu)}


def _pair_term(dims: Tuple[int, ...], parties: Tuple[int, int], generators, mu):
    matrix = np.zeros((int(np.prod(dims)),) * 2, dtype=np.complex128)
    for strength, generator in zip(mu, generators):
        if strength == 0:
            continue
        factors = [np.eye(d) for d in dims]
        factors[parties[0]] = generator
        factors[parties[1]] = generator
        matrix += strength * kron_all(*factors)
    return matrix


def build_matrix(spec: InteractionSpec) -> np.ndarray:
    """H_I = Σ μ_n g_n ⊗ g_n (soma dos três pares para 2x2x2)."""

    if spec.system == SYSTEM_TWO_QUBIT:
        return _pair_term(spec.dims, (0, 1), pauli_set().matrices, spec.mu)
    if spec.system == SYSTEM_TWO_QUTRIT:
        return _pair_term(spec.dims, (0, 1), gell_mann_set().matrices, spec.mu)
    sigmas = pauli_set().matrices
    return sum(
        _pair_term(spec.dims, PAIR_PARTIES[pair], sigmas, getattr(spec, f"mu_{pair}"))
        for pair in PAIR_ORDER
    )


def eigenvalues(spec: InteractionSpec) -> np.ndarray:
    return np.linalg.eigvalsh(build_matrix(spec))


def timescale(spec: InteractionSpec) -> float:
    """τ_H = 1 / (e_max − e_min)."""

    values = eigenvalues(spec)
    spread = float(values[-1] - values[0])
    if spread <= DEGENERATE_SPREAD_ATOL:
        raise DegenerateHamiltonianError(
            "Hamiltoniano sem dispersão espectral (acoplamentos nulos?)"
        )
    return 1.0 / spread


def h_max(spec: InteractionSpec) -> float:
    """Fator de interação μ1 + μ2 de Γ_E = f(p)·h_max (apenas 2x2)."""

    if spec.system != SYSTEM_TWO_QUBIT:
        raise CouplingSpecError("h_max só está definido para dois qubits")
    return spec.mu[0] + spec.mu[1]
