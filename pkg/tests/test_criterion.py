import math

import numpy as np
import pytest

from conftest import demo_problem
from flatlqr.bvp import BoundarySpec
from flatlqr.criterion import (Problem, eval_criterion, perturbation_check, sweep_horizon,
                               sweep_parameter, turnpike_diagnostic)
from flatlqr.errors import InvalidArgumentError, SweepFailedError
from flatlqr.lagrangian import QuadraticLagrangian, from_flat_terms

ENERGY = Problem(None, from_flat_terms([(1, 1.0, 0.0)]),
                 BoundarySpec([(0, 0.0)], [(0, 2.0)]))
MIXED = Problem(None, from_flat_terms([(0, 1.0, 0.0), (1, 1.0, 0.0)]),
                BoundarySpec([(0, 0.0)], [(0, 2.0)]))


def turnpike_problem(y1T):
    return Problem(None, from_flat_terms([(1, 1.0, 0.0), (2, 1.0, 0.0)]),
                   BoundarySpec([(0, 0.0), (1, 1.0)], [(0, y1T), (1, 2.0)]))


@pytest.mark.parametrize("T", [0.5, 1.0, 5.0])
def test_min_energy_cost(T):
    assert ENERGY.cost(T) == pytest.approx(4.0 / T, rel=1e-12)


@pytest.mark.parametrize("T", [0.3, 1.0, 3.0, 10.0])
def test_mixed_cost_is_coth(T):
    # y = 2 sinh(t) / sinh(T), J = [y y']_0^T
    assert MIXED.cost(T) == pytest.approx(4.0 / math.tanh(T), rel=1e-10)


def test_horizon_sweep_monotone_cost():
    result = sweep_horizon(ENERGY, 0.5, 5.0, 10)
    assert np.all(np.diff(result.values) < 0)
    assert result.argmin == pytest.approx(5.0, abs=1e-4)


def test_horizon_sweep_workers_agree():
    problem, _ = demo_problem("horizon", 1.0)
    a = sweep_horizon(problem, 0.5, 4.0, 15)
    b = sweep_horizon(problem, 0.5, 4.0, 15, workers=4)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.argmin == b.argmin


def test_parameter_sweep_synthetic_family():
    # J(p) = (p - 2)^2 + 1 exactly at T = 1
    L = QuadraticLagrangian([[0.0, 0.0], [0.0, 1.0]], [0.0, 0.0], 1.0)

    def family(p):
        return Problem(None, L, BoundarySpec([(0, 0.0)], [(0, p - 2.0)]))

    result = sweep_parameter(family, 1.0, 0.0, 5.0, 11)
    np.testing.assert_allclose(result.values, (result.abscissae - 2) ** 2 + 1, rtol=1e-12)
    assert result.argmin == pytest.approx(2.0, abs=1e-4)
    assert result.Jmin == pytest.approx(1.0, abs=1e-8)


def test_single_point_parameter_grid():
    L = QuadraticLagrangian([[0.0, 0.0], [0.0, 1.0]], [0.0, 0.0], 1.0)
    result = sweep_parameter(lambda p: Problem(None, L, BoundarySpec([(0, 0.0)], [(0, p)])),
                             1.0, 3.0, 4.0, 1)
    assert len(result.grid) == 1
    assert result.argmin == 3.0 and result.Jmin == pytest.approx(10.0)


def test_singular_points_are_recorded():
    # y'' + y = 0 with y(0), y(T) fixed is singular at T = pi
    problem = Problem(None, QuadraticLagrangian(np.diag([-1.0, 1.0]), [0.0, 0.0]),
                      BoundarySpec([(0, 0.0)], [(0, 1.0)]))
    result = sweep_horizon(problem, math.pi - 1, math.pi + 1, 3)
    assert [p.status for p in result.grid] == ["ok", "singular", "ok"]
    assert math.isnan(result.grid[1].J)


def test_all_failed_sweep():
    problem = Problem(None, QuadraticLagrangian(np.diag([-1.0, 1.0]), [0.0, 0.0]),
                      BoundarySpec([(0, 0.0)], [(0, 1.0)]))
    with pytest.raises(SweepFailedError):
        sweep_parameter(lambda p: problem, math.pi, 0.0, 1.0, 2)


def test_sweep_validation():
    with pytest.raises(InvalidArgumentError):
        sweep_horizon(ENERGY, 2.0, 1.0, 10)
    with pytest.raises(InvalidArgumentError):
        sweep_horizon(ENERGY, 1.0, 2.0, 2)


@pytest.mark.parametrize("T", [30.0, 60.0])
def test_turnpike_plateau(T):
    traj = turnpike_problem(3.0).solve(T)
    report = turnpike_diagnostic(traj, 1 / 6)
    assert report.plateau_value == pytest.approx(1.0, abs=1e-6)
    assert report.max_deviation < 0.05
    assert report.window == pytest.approx((T / 6, 5 * T / 6))


def test_turnpike_plateau_drifts_with_end_value():
    # the interior is an affine ramp whose slope is (y1T - 3) / (T - 2) to leading order
    traj = turnpike_problem(1.0).solve(30.0)
    slope = traj.c[2]
    assert slope == pytest.approx((1.0 - 3.0) / 28.0, rel=1e-6)
    assert turnpike_diagnostic(traj, 1 / 6).max_deviation > 0.5


def test_perturbation_check_accepts_optimum():
    problem, _ = demo_problem("horizon", 3.0)
    traj = problem.solve(3.0)
    rep = perturbation_check(problem.lagrangian, traj, problem.boundary, trials=30, seed=1)
    assert rep.max_rel_directional <= 1e-5
    assert rep.min_second_difference >= 0
    assert rep.min_gap > 0
    assert rep.J == pytest.approx(problem.cost(3.0), rel=1e-9)


def test_perturbation_check_rejects_non_stationary_curve():
    traj = MIXED.solve(2.0)
    rep = perturbation_check(ENERGY.lagrangian, traj, ENERGY.boundary, trials=20, seed=2)
    assert rep.max_rel_directional > 1e-3


def test_eval_criterion_panels_independent():
    problem, _ = demo_problem("integrator-rest", 4.0)
    traj = problem.solve(4.0)
    a = eval_criterion(problem.lagrangian, traj, 16)
    b = eval_criterion(problem.lagrangian, traj, 64)
    assert a == pytest.approx(b, rel=1e-12)


def test_turnpike_validation():
    with pytest.raises(InvalidArgumentError):
        turnpike_diagnostic(MIXED.solve(1.0), 0.6)
