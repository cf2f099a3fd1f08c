"""Testes da condução passo a passo ao longo de ψ_E(p)."""

from __future__ import annotations

import sys
from math import sqrt
from pathlib import Path

import numpy as np
import pytest

SRC_DIR = Path(__file__).resolve().parents[1] / "capacity-engine" / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from hamiltonians import SYSTEM_TWO_QUTRIT, InteractionSpec  # noqa: E402
from numeric_core import PureState, random_state  # noqa: E402
from protocol import (  # noqa: E402
    STOP_CROSSED,
    STOP_MAXIMAL,
    STOP_T_END,
    EvolutionRequestError,
    SteeringStepError,
    free_evolution_trace,
    steer,
)
from rates import f_curve, psi_E, tensor_measure  # noqa: E402

XY = InteractionSpec.two_qubit((1.0, 1.0, 0.0))


@pytest.fixture(scope="module")
def trajectory():
    return steer(XY, 0.01, 1e-4, 1.0)


def _max_rate_deviation(dt: float) -> float:
    result = steer(XY, 0.01, dt, 0.05)
    points = result.points
    return max(
        abs((b.entanglement - a.entanglement) / dt - 2.0 * f_curve(a.p))
        for a, b in zip(points, points[1:])
    )


def test_steering_reaches_maximal_entanglement(trajectory) -> None:
    assert trajectory.stop_reason in (STOP_MAXIMAL, STOP_CROSSED)
    assert trajectory.final.entanglement == pytest.approx(sqrt(3) - 1, abs=1e-4)
    assert trajectory.final.p <= 0.5 + 1e-12


def test_steered_entanglement_never_decreases(trajectory) -> None:
    energies = [point.entanglement for point in trajectory.points]

    assert all(b - a >= -1e-12 for a, b in zip(energies, energies[1:]))


def test_points_stay_on_optimal_family(trajectory) -> None:
    for point in trajectory.points:
        assert point.residual_r <= 1e-10
        assert point.residual_tau <= 1e-10
        assert point.entanglement == pytest.approx(tensor_measure(point.p), abs=1e-8)
        assert point.gamma == pytest.approx(2.0 * f_curve(point.p), abs=1e-8)
    assert trajectory.max_reset_error <= 1e-9


def test_points_are_sampled_on_uniform_grid(trajectory) -> None:
    times = [point.t for point in trajectory.points]

    assert times[0] == 0.0
    assert trajectory.points[0].p == pytest.approx(0.01)
    assert np.allclose(np.diff(times), 1e-4)
    assert trajectory.final.as_row()[0] == times[-1]


def test_per_step_gain_tracks_locked_rate_to_first_order() -> None:
    coarse = _max_rate_deviation(1e-4)
    fine = _max_rate_deviation(5e-5)

    assert coarse <= 2e-3
    assert coarse / fine == pytest.approx(2.0, rel=0.2)


def test_short_run_stops_at_end_time() -> None:
    result = steer(XY, 0.01, 1e-3, 0.01)

    assert result.stop_reason == STOP_T_END
    assert len(result.points) == 11
    assert result.final.t == pytest.approx(0.01)


def test_invalid_steering_requests_are_rejected() -> None:
    with pytest.raises(SteeringStepError):
        steer(XY, 0.6, 1e-4, 1.0)
    with pytest.raises(SteeringStepError):
        steer(XY, 0.0, 1e-4, 1.0)
    with pytest.raises(SteeringStepError):
        steer(XY, 0.01, 0.01, 1.0)
    with pytest.raises(SteeringStepError):
        steer(XY, 0.01, 1e-4, 0.0)
    with pytest.raises(SteeringStepError):
        steer(InteractionSpec.isotropic(SYSTEM_TWO_QUTRIT), 0.01, 1e-4, 1.0)
    with pytest.raises(SteeringStepError):
        zz = InteractionSpec.two_qubit((0.0, 0.0, 1.0), allow_unordered=True)
        steer(zz, 0.1, 1e-4, 1.0)


def test_free_evolution_of_stationary_state_is_flat() -> None:
    samples = free_evolution_trace(PureState.basis((2, 2), 0), XY, 0.01, 0.5)

    assert len(samples) == 51
    assert all(abs(sample.entanglement) <= 1e-12 for sample in samples)


def test_free_evolution_peaks_no_earlier_than_steering(trajectory) -> None:
    samples = free_evolution_trace(psi_E(0.01), XY, 1e-4, 1.0)
    peak = max(samples, key=lambda sample: sample.entanglement)

    assert peak.entanglement == pytest.approx(sqrt(3) - 1, abs=1e-4)
    assert trajectory.final.t <= peak.t + 1e-4


def test_free_evolution_is_deterministic_for_qutrits() -> None:
    spec = InteractionSpec.isotropic(SYSTEM_TWO_QUTRIT)
    state = random_state((3, 3), seed=4)

    first = free_evolution_trace(state, spec, 0.01, 0.1)
    second = free_evolution_trace(state, spec, 0.01, 0.1)

    assert first == second
    assert len(first) == 11
    with pytest.raises(EvolutionRequestError, match="dims"):
        free_evolution_trace(state, XY, 0.01, 0.1)


@pytest.mark.parametrize("dt, t_end", [(0.0, 0.1), (-0.01, 0.1), (0.01, 0.0)])
def test_free_evolution_rejects_bad_steps(dt, t_end) -> None:
    spec = InteractionSpec.isotropic(SYSTEM_TWO_QUTRIT)

    with pytest.raises(EvolutionRequestError):
        free_evolution_trace(random_state((3, 3), seed=4), spec, dt, t_end)
