# -*- coding: utf-8 -*-
"""Tests de l'intégrateur de Lindblad et du système à deux niveaux avec pertes"""
import math

import numpy as np
import pytest

from core.data_model import DensityMatrix, IntegratorParams, LindbladModel, LossSystem
from core.exceptions import DomainError, IntegrationError
from core.open_system import OpenSystemSolver


@pytest.fixture
def solver():
    return OpenSystemSolver()


def test_model_dimensions(solver):
    assert solver.build_loss_model(LossSystem(1.0, 0.0, 0.0)).dim == 3
    assert solver.build_loss_model(LossSystem(1.0, 0.0, 0.0)).jump_operators == ()
    recycling = solver.build_loss_model(LossSystem(1.0, 0.0, 2.0), sink=False)
    assert recycling.dim == 2
    assert len(recycling.jump_operators) == 1


def test_ground_state_is_stationary_without_drive(solver):
    model = solver.build_loss_model(LossSystem(0.0, 0.0, 1.0))
    trajectory = solver.evolve(model, DensityMatrix.basis(3, 0), IntegratorParams(1e-2, 1.0))
    assert np.allclose(trajectory.states[-1], DensityMatrix.basis(3, 0).entries, atol=1e-14)


def test_sink_decay_is_exponential(solver):
    model = solver.build_loss_model(LossSystem(0.0, 0.0, 1.0))
    trajectory = solver.evolve(model, DensityMatrix.basis(3, 1), IntegratorParams(1e-3, 2.0, stride=100))
    for t, state in zip(trajectory.times, trajectory.states):
        assert state[2, 2].real == pytest.approx(1.0 - math.exp(-t), abs=1e-9)
        assert state[1, 1].real == pytest.approx(math.exp(-t), abs=1e-9)


def test_recycling_decay_returns_to_ground(solver):
    model = solver.build_loss_model(LossSystem(0.0, 0.0, 2.0), sink=False)
    trajectory = solver.evolve(model, DensityMatrix.basis(2, 1), IntegratorParams(1e-3, 1.0, stride=50))
    final = trajectory.final
    assert final.trace == pytest.approx(1.0, abs=1e-12)
    assert final.populations()[1] == pytest.approx(math.exp(-2.0), abs=1e-9)


def test_rabi_oscillation(solver):
    model = solver.build_loss_model(LossSystem(1.0, 0.0, 0.0), sink=False)
    trajectory = solver.evolve(model, DensityMatrix.basis(2, 0), IntegratorParams(1e-3, 2 * math.pi))
    expected = np.sin(trajectory.times / 2.0) ** 2
    assert np.max(np.abs(trajectory.states[:, 1, 1].real - expected)) <= 1e-8
    assert trajectory.times[-1] == pytest.approx(2 * math.pi, rel=1e-15)


def test_long_run_stays_physical(solver):
    model = solver.build_loss_model(LossSystem(1.0, 0.3, 0.7))
    trajectory = solver.evolve(model, DensityMatrix.basis(3, 0), IntegratorParams(1e-3, 10.0))
    assert len(trajectory.times) == 10001
    for state in trajectory.states[::500]:
        assert abs(np.trace(state).real - 1.0) < 1e-8
        assert np.max(np.abs(state - state.conj().T)) < 1e-10
        assert np.min(np.linalg.eigvalsh(state)) >= -1e-8


def test_invalid_inputs(solver):
    model = solver.build_loss_model(LossSystem(1.0, 0.0, 1.0))
    with pytest.raises(DomainError):
        solver.evolve(model, DensityMatrix.basis(2, 0), IntegratorParams(1e-2, 1.0))

    skewed = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]], dtype=complex)
    with pytest.raises(DomainError):
        solver.evolve(model, DensityMatrix(skewed), IntegratorParams(1e-2, 1.0))

    non_hermitian = LindbladModel(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    with pytest.raises(DomainError):
        solver.evolve(non_hermitian, DensityMatrix.basis(2, 0), IntegratorParams(1e-2, 1.0))

    with pytest.raises(DomainError):
        IntegratorParams(dt=2.0, t_final=1.0)


def test_unstable_step_raises(solver):
    model = solver.build_loss_model(LossSystem(0.0, 0.0, 1000.0), sink=False)
    with pytest.raises(IntegrationError):
        solver.evolve(model, DensityMatrix.basis(2, 1), IntegratorParams(1e-2, 1.0))


# --- Survie ---

def test_sink_and_no_jump_survival_agree(solver):
    rng = np.random.default_rng(7)
    for _ in range(100):
        system = LossSystem(rng.uniform(0.5, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(0.0, 5.0))
        assert solver.survival_probability(system, 1.0) == pytest.approx(
            solver.no_jump_survival(system, 1.0), abs=1e-8)


@pytest.mark.parametrize("ratio", [20.0, 50.0, 100.0])
def test_decay_rate_matches_effective_rate(solver, ratio):
    omega = 1.0
    system = LossSystem(omega, 0.0, ratio * omega)
    t = 2 * math.pi / omega
    measured = -math.log(solver.survival_probability(system, t)) / t
    assert measured == pytest.approx(omega ** 2 / (ratio * omega), rel=0.05)


def test_zeno_survival_grows_with_loss_rate(solver):
    t = 2 * math.pi
    survival = [solver.survival_probability(LossSystem(1.0, 0.0, ratio), t) for ratio in (2.0, 5.0, 10.0, 20.0, 50.0)]
    assert all(a < b for a, b in zip(survival, survival[1:]))


def test_survival_edge_cases(solver):
    assert solver.survival_probability(LossSystem(0.0, 0.0, 3.0), 5.0) == pytest.approx(1.0, abs=1e-12)
    assert solver.survival_probability(LossSystem(1.0, 0.0, 0.0), 2 * math.pi) == pytest.approx(1.0, abs=1e-12)
    assert solver.survival_probability(LossSystem(1.0, 0.0, 1.0), 0.0) == 1.0
    strong = solver.survival_probability(LossSystem(1.0, 0.0, 100.0), 2 * math.pi)
    assert strong == pytest.approx(0.939, abs=1e-2)


def test_effective_rate_limits(solver):
    assert solver.gamma_eff(LossSystem(1.0, 0.0, 100.0)).rate == pytest.approx(0.01)
    assert solver.gamma_eff(LossSystem(1.0, 100.0, 1.0)).rate == pytest.approx(1.0 / (4 * 100.0 ** 2), rel=1e-4)
    assert solver.gamma_eff(LossSystem(0.0, 0.0, 1.0)).rate == 0.0
    assert solver.gamma_eff(LossSystem(1.0, 0.0, 0.0)).rate == 0.0
    assert solver.gamma_eff(LossSystem(1.0, 0.0, 100.0)).perturbative
    assert not solver.gamma_eff(LossSystem(1.0, 0.0, 2.0)).perturbative


def test_trajectory_export(solver, tmp_path):
    model = solver.build_loss_model(LossSystem(1.0, 0.0, 1.0))
    trajectory = solver.evolve(model, DensityMatrix.basis(3, 0), IntegratorParams(1e-2, 0.1))

    populations = solver.export_trajectory_csv(trajectory, tmp_path / "pop.csv")
    lines = populations.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t_s,pop_g,pop_e,pop_lost"
    assert len(lines) == 1 + len(trajectory.times)

    entries = solver.export_trajectory_csv(trajectory, tmp_path / "rho.csv", columns="entries")
    header = entries.read_text(encoding="utf-8").splitlines()[0].split(",")
    assert len(header) == 1 + 2 * 9
    assert header[1:3] == ["re_0_0", "im_0_0"]

    with pytest.raises(DomainError):
        solver.export_trajectory_csv(trajectory, tmp_path / "bad.csv", columns="bloch")
