import numpy as np
import pytest

from pricesim import (NoiseModel, SolverSettings, kkt_residual,
                      project_l1_ball, soft_threshold, solve)

from conftest import grid_objective_minimum, make_instance


def test_soft_threshold():
    assert soft_threshold(np.array([3.0, -0.5, 1.0]), 1.0).tolist() == [2.0, 0.0, 0.0]
    v = np.array([0.3, -2.0, 1.7])
    assert np.array_equal(soft_threshold(v, 0.0), v)
    assert soft_threshold(np.array([-2.0, 2.0]), 2.0).tolist() == [0.0, 0.0]
    with pytest.raises(ValueError):
        soft_threshold(v, -0.1)


def test_project_l1_ball_basics():
    v = np.array([0.5, 0.2])
    assert np.array_equal(project_l1_ball(v, 1.0), v)
    assert project_l1_ball(np.array([2.0, 0.0]), 1.0).tolist() == [1.0, 0.0]
    assert project_l1_ball(np.array([1.0, 1.0]), 1.0) == pytest.approx([0.5, 0.5])


def test_project_l1_ball_against_grid():
    # Fine 2-d search over the ball independently confirms the sorting rule.
    target = np.array([1.0, 1.0])
    axis = np.arange(-1.0, 1.0 + 5e-4, 1e-3)
    pts = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
    pts = pts[np.sum(np.abs(pts), axis=1) <= 1.0]
    best = pts[np.argmin(np.sum((pts - target) ** 2, axis=1))]
    assert project_l1_ball(target, 1.0) == pytest.approx(best, abs=2e-3)


def test_project_l1_ball_properties(rng):
    for _ in range(50):
        v = rng.standard_normal(int(rng.integers(1, 12))) * 3
        radius = float(rng.uniform(0.2, 2.5))
        proj = project_l1_ball(v, radius)
        assert np.sum(np.abs(proj)) <= radius + 1e-9
        # projection never flips signs or grows coordinates
        assert np.all(np.abs(proj) <= np.abs(v) + 1e-12)
        assert np.all(proj * v >= -1e-12)


def test_huge_penalty_returns_zero(rng, gaussian):
    contexts, prices, outcomes, _ = make_instance(rng, 4, 30)
    result = solve(contexts, prices, outcomes, lam=50.0, radius=2.0,
                   noise=gaussian, theta_init=np.full(4, 0.4))
    assert np.array_equal(result.theta, np.zeros(4))
    assert result.converged
    assert kkt_residual(np.zeros(4), contexts, prices, outcomes, 50.0, 2.0,
                        gaussian) == 0.0


def test_solution_matches_grid_minimum(rng, gaussian):
    contexts, prices, outcomes, _ = make_instance(rng, 2, 25)
    result = solve(contexts, prices, outcomes, lam=0.08, radius=1.0, noise=gaussian)
    assert result.converged
    grid_min = grid_objective_minimum(contexts, prices, outcomes, 0.08, 1.0, gaussian)
    assert abs(result.objective - grid_min) <= 1e-4


def test_recovery_from_many_records(rng, gaussian):
    # Shrinkage bias scales with the penalty, so a schedule-sized lam at
    # t = 400 recovers the generating vector to a fraction of its size.
    contexts, prices, outcomes, theta_gen = make_instance(rng, 2, 400)
    result = solve(contexts, prices, outcomes, lam=0.02, radius=2.0, noise=gaussian)
    assert result.converged
    assert np.linalg.norm(result.theta - theta_gen) < 0.2


def test_cross_init_agreement(rng, gaussian):
    contexts, prices, outcomes, _ = make_instance(rng, 5, 120)
    r1 = solve(contexts, prices, outcomes, 0.05, 2.0, gaussian,
               theta_init=np.zeros(5))
    r2 = solve(contexts, prices, outcomes, 0.05, 2.0, gaussian,
               theta_init=np.array([0.4, -0.4, 0.4, -0.4, 0.4]))
    assert abs(r1.objective - r2.objective) <= 1e-8


def test_objective_descends_monotonically(rng, gaussian):
    contexts, prices, outcomes, _ = make_instance(rng, 6, 80)
    # Deterministic prefixes: k iterations of the same run.
    objs = [solve(contexts, prices, outcomes, 0.05, 2.0, gaussian,
                  theta_init=np.full(6, 0.3),
                  settings=SolverSettings(max_iterations=k)).objective
            for k in range(1, 16)]
    assert all(a >= b - 1e-12 for a, b in zip(objs, objs[1:]))


def test_iterates_stay_feasible(rng, gaussian):
    contexts, prices, outcomes, _ = make_instance(rng, 6, 60, theta_scale=1.5)
    for k in range(1, 12):
        res = solve(contexts, prices, outcomes, 0.01, 0.7, gaussian,
                    settings=SolverSettings(max_iterations=k))
        assert np.sum(np.abs(res.theta)) <= 0.7 + 1e-9
    # infeasible warm start is projected before use
    res = solve(contexts, prices, outcomes, 0.01, 0.7, gaussian,
                theta_init=np.full(6, 5.0))
    assert np.sum(np.abs(res.theta)) <= 0.7 + 1e-9


def test_shrinkage_monotone_in_penalty(rng, gaussian):
    contexts, prices, outcomes, _ = make_instance(rng, 5, 150)
    lams = [0.01, 0.03, 0.1, 0.3, 1.0]
    norms = [np.sum(np.abs(solve(contexts, prices, outcomes, lam, 3.0, gaussian).theta))
             for lam in lams]
    assert all(a >= b - 1e-6 for a, b in zip(norms, norms[1:]))


def test_kkt_residual_detects_perturbation(rng, gaussian):
    contexts, prices, outcomes, _ = make_instance(rng, 2, 150)
    res = solve(contexts, prices, outcomes, 0.08, 2.0, gaussian)
    at_opt = kkt_residual(res.theta, contexts, prices, outcomes, 0.08, 2.0, gaussian)
    assert at_opt <= 1e-6
    moved = res.theta + 0.1 * np.eye(2)[0]
    assert kkt_residual(moved, contexts, prices, outcomes, 0.08, 2.0, gaussian) > 1e-3


def test_result_reports_convergence(rng, gaussian):
    contexts, prices, outcomes, _ = make_instance(rng, 5, 90)
    res = solve(contexts, prices, outcomes, 0.05, 2.0, gaussian)
    assert res.converged and res.kkt_residual <= 1e-7
    starved = solve(contexts, prices, outcomes, 0.05, 2.0, gaussian,
                    settings=SolverSettings(max_iterations=1))
    assert not starved.converged


def test_single_record_problem_is_well_posed(gaussian):
    res = solve(np.array([[0.5, -0.5]]), np.array([0.7]), np.array([1.0]),
                0.05, 1.0, gaussian)
    assert res.converged
    assert np.sum(np.abs(res.theta)) <= 1.0 + 1e-9


def test_settings_validation():
    with pytest.raises(ValueError):
        SolverSettings(max_iterations=0)
    with pytest.raises(ValueError):
        SolverSettings(step_shrink=1.0)
    with pytest.raises(ValueError):
        SolverSettings(kkt_tolerance=0.0)
