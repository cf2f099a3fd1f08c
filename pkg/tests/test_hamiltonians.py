"""Testes das especificações de acoplamento e da matriz H_I."""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

SRC_DIR = Path(__file__).resolve().parents[1] / "capacity-engine" / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from hamiltonians import (  # noqa: E402
    SYSTEM_THREE_QUBIT,
    SYSTEM_TWO_QUBIT,
    SYSTEM_TWO_QUTRIT,
    CouplingOrderError,
    CouplingSpecError,
    DegenerateHamiltonianError,
    InteractionSpec,
    build_matrix,
    eigenvalues,
    h_max,
    timescale,
)


def _swap(d: int) -> np.ndarray:
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[j * d + i, i * d + j] = 1.0
    return swap


def test_xy_coupling_spectrum_and_timescale() -> None:
    spec = InteractionSpec.two_qubit((1.0, 1.0, 0.0))

    assert np.allclose(eigenvalues(spec), [-2.0, 0.0, 0.0, 2.0])
    assert timescale(spec) == pytest.approx(0.25)
    assert h_max(spec) == pytest.approx(2.0)


def test_isotropic_two_qubit_hamiltonian_is_swap_form() -> None:
    h = build_matrix(InteractionSpec.isotropic(SYSTEM_TWO_QUBIT))

    assert np.allclose(h, 2 * _swap(2) - np.eye(4))


def test_isotropic_qutrit_hamiltonian_is_swap_form() -> None:
    h = build_matrix(InteractionSpec.isotropic(SYSTEM_TWO_QUTRIT))

    assert np.allclose(h, 2 * _swap(3) - (2 / 3) * np.eye(9))


def test_three_qubit_hamiltonian_sums_the_three_pairs() -> None:
    spec = InteractionSpec.three_qubit(
        (1.0, 0.5, 0.0), (0.3, 0.2, 0.1), (0.0, 0.0, 0.0)
    )
    ab = build_matrix(InteractionSpec.two_qubit((1.0, 0.5, 0.0)))
    bc = build_matrix(InteractionSpec.two_qubit((0.3, 0.2, 0.1)))

    expected = np.kron(ab, np.eye(2)) + np.kron(np.eye(2), bc)

    assert np.allclose(build_matrix(spec), expected)
    assert np.allclose(build_matrix(spec), build_matrix(spec).conj().T)


def test_coupling_order_is_enforced_unless_allowed() -> None:
    with pytest.raises(CouplingOrderError):
        InteractionSpec.two_qubit((0.0, 1.0, 1.0))
    with pytest.raises(CouplingOrderError):
        InteractionSpec.three_qubit((1, 1, 1), (0, 1, 0), (1, 1, 1))

    spec = InteractionSpec.two_qubit((0.0, 1.0, 1.0), allow_unordered=True)

    assert spec.mu == (0.0, 1.0, 1.0)


def test_coupling_counts_and_systems_are_validated() -> None:
    with pytest.raises(CouplingSpecError):
        InteractionSpec.two_qubit((1.0, 0.5))
    with pytest.raises(CouplingSpecError):
        InteractionSpec.two_qutrit((1.0,) * 3)
    with pytest.raises(CouplingSpecError):
        InteractionSpec("4x4", mu=(1.0,))
    with pytest.raises(CouplingSpecError):
        InteractionSpec.isotropic("2x3")


def test_zero_couplings_have_no_timescale() -> None:
    spec = InteractionSpec.two_qutrit((0.0,) * 8)

    with pytest.raises(DegenerateHamiltonianError):
        timescale(spec)


def test_h_max_is_two_qubit_only() -> None:
    assert h_max(InteractionSpec.two_qubit((1.0, 0.5, 0.0))) == pytest.approx(1.5)
    with pytest.raises(CouplingSpecError):
        h_max(InteractionSpec.isotropic(SYSTEM_TWO_QUTRIT))


def test_coupling_items_scaling_and_payload() -> None:
    spec = InteractionSpec.isotropic(SYSTEM_THREE_QUBIT, 2.0)

    labels = [label for label, _ in spec.coupling_items()]
    doubled = InteractionSpec.two_qubit((1.0, 0.5, 0.0)).scaled(2.0)

    assert labels == ["ab1", "ab2", "ab3", "bc1", "bc2", "bc3", "ac1", "ac2", "ac3"]
    assert spec.dims == (2, 2, 2)
    assert doubled.mu == (2.0, 1.0, 0.0)
    assert spec.to_dict() == {
        "system": "2x2x2",
        "mu_ab": [2.0, 2.0, 2.0],
        "mu_bc": [2.0, 2.0, 2.0],
        "mu_ac": [2.0, 2.0, 2.0],
    }


@pytest.mark.parametrize(
    "spec",
    [
        InteractionSpec.two_qubit((1.0, 0.5, 0.25)),
        InteractionSpec.isotropic(SYSTEM_TWO_QUTRIT),
        InteractionSpec.isotropic(SYSTEM_THREE_QUBIT),
    ],
)
def test_scaling_couplings_scales_spectrum_and_timescale(spec) -> None:
    base_values = eigenvalues(spec)
    base_tau = timescale(spec)

    for factor in (0.5, 2.0, 10.0):
        scaled = spec.scaled(factor)

        assert np.allclose(eigenvalues(scaled), factor * base_values, atol=1e-10)
        assert timescale(scaled) == pytest.approx(base_tau / factor, rel=1e-10)
