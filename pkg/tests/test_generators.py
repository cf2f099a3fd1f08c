"""Testes dos geradores de Pauli/Gell-Mann e das constantes de estrutura."""

from __future__ import annotations

import sys
from math import sqrt
from pathlib import Path

import numpy as np
import pytest

SRC_DIR = Path(__file__).resolve().parents[1] / "capacity-engine" / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from generators import (  # noqa: E402
    GeneratorError,
    GeneratorSet,
    cached_structure_constants,
    gell_mann_set,
    generator_set,
    jacobi_residual,
    levi_civita,
    pauli_set,
    verify_product_identity,
)


def test_generator_sets_are_trace_orthonormal() -> None:
    assert len(pauli_set()) == 3
    assert len(gell_mann_set()) == 8
    assert pauli_set().normalization_residual() <= 1e-12
    assert gell_mann_set().normalization_residual() <= 1e-12
    assert generator_set(3) is gell_mann_set()
    with pytest.raises(GeneratorError):
        generator_set(4)


def test_checked_rejects_badly_normalized_generators() -> None:
    scaled = [2.0 * m for m in pauli_set().matrices]

    with pytest.raises(GeneratorError):
        GeneratorSet.checked(2, scaled)
    with pytest.raises(GeneratorError):
        GeneratorSet(2, pauli_set().matrices[:2])


def test_su2_structure_constants_are_levi_civita() -> None:
    sc = cached_structure_constants(2)

    assert levi_civita()[0, 1, 2] == pytest.approx(1.0)
    assert levi_civita()[1, 0, 2] == pytest.approx(-1.0)
    assert levi_civita()[0, 0, 2] == 0.0
    assert np.allclose(sc.g, 0.0)


def test_su3_structure_constants_match_known_table() -> None:
    sc = cached_structure_constants(3)

    assert sc.f[0, 1, 2] == pytest.approx(1.0)
    assert sc.f[0, 3, 6] == pytest.approx(0.5)
    assert sc.f[0, 4, 5] == pytest.approx(-0.5)
    assert sc.f[3, 4, 7] == pytest.approx(sqrt(3) / 2)
    assert sc.f[5, 6, 7] == pytest.approx(sqrt(3) / 2)
    assert sc.g[0, 0, 7] == pytest.approx(1 / sqrt(3))
    assert sc.g[7, 7, 7] == pytest.approx(-1 / sqrt(3))
    assert sc.g[3, 3, 7] == pytest.approx(-1 / (2 * sqrt(3)))
    assert sc.g[1, 3, 6] == pytest.approx(-0.5)


def test_structure_constants_have_exact_symmetry() -> None:
    sc = cached_structure_constants(3)

    assert np.array_equal(sc.f, -np.transpose(sc.f, (1, 0, 2)))
    assert np.array_equal(sc.f, -np.transpose(sc.f, (0, 2, 1)))
    assert np.array_equal(sc.g, np.transpose(sc.g, (1, 0, 2)))
    assert np.array_equal(sc.g, np.transpose(sc.g, (2, 1, 0)))


def test_jacobi_identity_holds_for_both_algebras() -> None:
    assert jacobi_residual(cached_structure_constants(2)) <= 1e-12
    assert jacobi_residual(cached_structure_constants(3)) <= 1e-12


def test_product_identity_detects_perturbed_generator() -> None:
    sc = cached_structure_constants(3)
    matrices = [np.array(m) for m in gell_mann_set().matrices]
    matrices[0][0, 0] += 0.01

    assert verify_product_identity(gell_mann_set(), sc) <= 1e-12
    assert verify_product_identity(GeneratorSet(3, tuple(matrices)), sc) > 1e-3


def test_product_identity_is_only_defined_for_qutrits() -> None:
    with pytest.raises(GeneratorError):
        verify_product_identity(pauli_set(), cached_structure_constants(2))
