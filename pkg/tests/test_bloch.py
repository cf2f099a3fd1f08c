"""Testes da decomposição de Bloch e da medida ‖T‖ − c."""

from __future__ import annotations

import sys
from math import sqrt
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import unitary_group

SRC_DIR = Path(__file__).resolve().parents[1] / "capacity-engine" / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from bloch import (  # noqa: E402
    BlochDecomposition2Q,
    BlochDecomposition2Qutrit,
    BlochDecomposition3Q,
    NegativeEntanglementError,
    UnsupportedShapeError,
    correlation_model,
    decompose,
    entanglement,
    entanglement_from_norm,
    reconstruct_density,
)
from numeric_core import PureState, kron_all, random_state  # noqa: E402

GHZ = PureState.normalized((2, 2, 2), [1, 0, 0, 0, 0, 0, 0, 1])
W = PureState.normalized((2, 2, 2), [0, 1, 1, 0, 1, 0, 0, 0])


def test_product_two_qubit_state_has_unit_vectors_and_zero_entanglement() -> None:
    decomp = decompose(PureState.basis((2, 2), 0))

    assert isinstance(decomp, BlochDecomposition2Q)
    assert np.allclose(decomp.r, [0, 0, 1])
    assert np.allclose(decomp.s, [0, 0, 1])
    assert np.allclose(decomp.T, np.diag([0, 0, 1]))
    assert entanglement(PureState.basis((2, 2), 0)) == 0.0


def test_bell_state_reaches_maximal_two_qubit_measure() -> None:
    bell = PureState.normalized((2, 2), [1, 0, 0, 1])

    decomp = decompose(bell)

    assert np.allclose(decomp.r, 0.0)
    assert np.allclose(decomp.T, np.diag([1, -1, 1]))
    assert entanglement(bell) == pytest.approx(sqrt(3) - 1, abs=1e-12)


def test_qutrit_product_state_has_correlation_norm_three() -> None:
    decomp = decompose(PureState.basis((3, 3), 0))

    assert isinstance(decomp, BlochDecomposition2Qutrit)
    assert decomp.correlation_norm == pytest.approx(3.0, abs=1e-12)
    assert entanglement(PureState.basis((3, 3), 0)) == pytest.approx(0.0, abs=1e-12)


def test_maximally_entangled_qutrits() -> None:
    state = PureState.normalized((3, 3), [1, 0, 0, 0, 1, 0, 0, 0, 1])

    assert np.allclose(decompose(state).lam_a, 0.0)
    assert entanglement(state) == pytest.approx(3 * sqrt(2) - 3, abs=1e-12)


def test_three_qubit_reference_states() -> None:
    assert isinstance(decompose(GHZ), BlochDecomposition3Q)
    assert entanglement(GHZ) == pytest.approx(1.0, abs=1e-12)
    assert entanglement(W) == pytest.approx(sqrt(11 / 3) - 1, abs=1e-12)
    assert entanglement(PureState.basis((2, 2, 2), 5)) == pytest.approx(
        0.0, abs=1e-12
    )


@pytest.mark.parametrize("dims", [(2, 2), (3, 3), (2, 2, 2)])
def test_decomposition_reconstructs_density(dims) -> None:
    for seed in range(5):
        state = random_state(dims, seed=seed)
        rho = reconstruct_density(decompose(state))
        assert np.allclose(rho, state.density(), atol=1e-12)


@pytest.mark.parametrize("dims", [(2, 2), (3, 3), (2, 2, 2)])
def test_entanglement_is_local_unitary_invariant(dims) -> None:
    rng = np.random.default_rng(3)
    for seed in range(10):
        state = random_state(dims, seed=seed)
        local = kron_all(*(unitary_group.rvs(d, random_state=rng) for d in dims))
        rotated = PureState.normalized(dims, local @ state.amps)
        assert entanglement(rotated) == pytest.approx(entanglement(state), abs=1e-10)


@pytest.mark.parametrize("dims", [(2, 2), (3, 3), (2, 2, 2)])
def test_random_product_states_have_zero_entanglement(dims) -> None:
    rng = np.random.default_rng(17)
    for _ in range(10):
        factors = [rng.standard_normal(d) + 1j * rng.standard_normal(d) for d in dims]
        state = PureState.normalized(dims, kron_all(*factors))
        assert entanglement(state) <= 1e-8


def test_correlation_model_shapes() -> None:
    assert correlation_model((2, 2)).operators.shape == (9, 4, 4)
    assert correlation_model((3, 3)).operators.shape == (64, 9, 9)
    assert correlation_model((2, 2, 2)).tensor_shape == (3, 3, 3)
    with pytest.raises(UnsupportedShapeError):
        correlation_model((2, 3))
    with pytest.raises(UnsupportedShapeError):
        entanglement(PureState.basis((2, 2, 2, 2), 0))


def test_entanglement_from_norm_clamps_rounding_only() -> None:
    assert entanglement_from_norm(1.0 - 1e-10, 1.0) == 0.0
    assert entanglement_from_norm(2.5, 1.0) == pytest.approx(1.5)
    with pytest.raises(NegativeEntanglementError):
        entanglement_from_norm(0.5, 1.0)


def test_to_dict_uses_plain_lists() -> None:
    payload = decompose(GHZ).to_dict()

    assert set(payload) == {"r", "s", "q", "t_AB", "t_AC", "t_BC", "tau"}
    assert isinstance(payload["tau"], list)
    assert payload["tau"][0][0][0] == pytest.approx(1.0)
