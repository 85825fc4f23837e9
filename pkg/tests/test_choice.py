import math

import numpy as np
import pytest

from pricesim import (DemandParameter, NoiseModel, TransactionRecord,
                      neg_log_likelihood, sale_status, score, stack_records,
                      steepness, willingness_to_pay)
from pricesim.choice import score_increments
from pricesim.errors import DimensionMismatch, ProbabilityUnderflow

from conftest import make_instance


def test_record_validation():
    rec = TransactionRecord(x=np.array([0.5, -1.0]), p=1.2, y=1)
    assert rec.x.dtype == float
    with pytest.raises(ValueError):
        TransactionRecord(x=np.array([1.5, 0.0]), p=1.0, y=1)
    with pytest.raises(ValueError):
        TransactionRecord(x=np.array([0.5]), p=1.0, y=0)
    with pytest.raises(DimensionMismatch):
        TransactionRecord(x=np.eye(2), p=1.0, y=1)


def test_stack_records():
    recs = [TransactionRecord(np.array([0.1, 0.2]), 1.0, 1),
            TransactionRecord(np.array([-0.3, 0.4]), 0.5, -1)]
    contexts, prices, outcomes = stack_records(recs)
    assert contexts.shape == (2, 2)
    assert prices.tolist() == [1.0, 0.5]
    assert outcomes.tolist() == [1.0, -1.0]
    with pytest.raises(ValueError):
        stack_records([])


def test_demand_parameter_membership():
    theta = np.array([1.0, 1.0, 1.0, 0.0])
    assert DemandParameter(theta, s0=3, w_budget=3.0).in_model_space()
    assert not DemandParameter(theta, s0=2, w_budget=3.0).in_model_space()
    assert not DemandParameter(theta, s0=3, w_budget=2.5).in_model_space()


def test_willingness_to_pay():
    theta = np.array([1.0, 1.0, 1.0] + [0.0] * 7)
    e1 = np.zeros(10); e1[0] = 1.0
    assert willingness_to_pay(theta, e1, 0.0) == pytest.approx(1.0)
    assert willingness_to_pay(np.zeros(3), np.array([0.2, 0.1, -1.0]), 0.3) == pytest.approx(0.3)
    half = np.array([0.5, 0.5, 0.5] + [0.0] * 7)
    assert willingness_to_pay(theta, half, -0.5) == pytest.approx(1.0)
    with pytest.raises(DimensionMismatch):
        willingness_to_pay(np.zeros(3), np.zeros(4), 0.0)


def test_sale_status_tie_is_a_sale():
    assert sale_status(1.0, 1.0) == 1
    assert sale_status(0.9, 1.0) == -1
    assert sale_status(2.0, 1.0) == 1


def test_nll_values(gaussian):
    x = np.array([[0.5, 0.5]])
    theta = np.array([1.0, 1.0])
    # u = 0: either outcome has probability 1/2
    assert neg_log_likelihood(theta, x, np.array([1.0]), np.array([1.0]),
                              gaussian) == pytest.approx(math.log(2))
    two = np.vstack([x, x])
    assert neg_log_likelihood(theta, two, np.array([1.0, 1.0]),
                              np.array([1.0, -1.0]), gaussian) == pytest.approx(math.log(2))
    uni = NoiseModel.uniform(0, 1)
    assert neg_log_likelihood(np.zeros(2), x, np.array([0.25]), np.array([-1.0]),
                              uni) == pytest.approx(-math.log(0.25))


@pytest.mark.parametrize("noise", [NoiseModel.gaussian(0.1, 1.3), NoiseModel.laplace()])
def test_score_matches_finite_differences(rng, noise):
    h = 1e-6
    for _ in range(50):
        d = int(rng.integers(2, 8))
        contexts, prices, outcomes, _ = make_instance(rng, d, int(rng.integers(5, 40)),
                                                      noise=noise)
        theta = rng.uniform(-0.8, 0.8, size=d)
        grad = score(theta, contexts, prices, outcomes, noise)
        fd = np.empty(d)
        for i in range(d):
            e = np.zeros(d); e[i] = h
            fd[i] = (neg_log_likelihood(theta + e, contexts, prices, outcomes, noise)
                     - neg_log_likelihood(theta - e, contexts, prices, outcomes, noise)) / (2 * h)
        scale = max(1.0, float(np.linalg.norm(grad)))
        assert np.linalg.norm(fd - grad) / scale < 1e-5


def test_score_value_at_zero_residual(gaussian):
    # Single record with u = 0 and a sale: the slope is the hazard at zero,
    # 2 * pdf(0); the gradient direction is -x.
    x = np.array([[0.25, -0.5]])
    grad = score(np.zeros(2), x, np.array([0.0]), np.array([1.0]), gaussian)
    xi = 2.0 / math.sqrt(2 * math.pi)
    assert grad == pytest.approx(-xi * x[0])


@pytest.mark.parametrize("noise", [NoiseModel.gaussian(), NoiseModel.laplace()])
def test_loss_is_convex_along_segments(rng, noise):
    for _ in range(25):
        d = 4
        contexts, prices, outcomes, _ = make_instance(rng, d, 20, noise=noise)
        t1 = rng.uniform(-1, 1, size=d)
        t2 = rng.uniform(-1, 1, size=d)
        a = rng.uniform(0, 1)
        lhs = neg_log_likelihood(a * t1 + (1 - a) * t2, contexts, prices, outcomes, noise)
        rhs = (a * neg_log_likelihood(t1, contexts, prices, outcomes, noise)
               + (1 - a) * neg_log_likelihood(t2, contexts, prices, outcomes, noise))
        assert lhs <= rhs + 1e-10


def test_score_increments_bounded_by_steepness(rng, gaussian):
    w = 1.5
    u_w = steepness(gaussian, w)
    for _ in range(20):
        d = 5
        contexts = rng.uniform(-1, 1, size=(12, d))
        theta = rng.uniform(-w / d, w / d, size=d)
        targets = rng.uniform(-3 * w, 3 * w, size=12)  # residuals in [-3W, 3W]
        prices = targets + contexts @ theta
        outcomes = rng.choice([-1.0, 1.0], size=12)
        xi = score_increments(theta, contexts, prices, outcomes, gaussian)
        assert np.all(np.abs(xi) <= u_w + 1e-9)


def test_zero_context_column_gives_zero_gradient(rng, gaussian):
    contexts, prices, outcomes, _ = make_instance(rng, 4, 15)
    contexts[:, 2] = 0.0
    grad = score(np.zeros(4), contexts, prices, outcomes, gaussian)
    assert grad[2] == 0.0


def test_probability_clamp_warns_and_stays_finite():
    uni = NoiseModel.uniform(0, 1)
    contexts = np.array([[1.0]])
    # A pass at a residual above the support: F = 1, so a sale there has
    # probability zero and must be clamped.
    with pytest.warns(ProbabilityUnderflow):
        value = neg_log_likelihood(np.zeros(1), contexts, np.array([2.0]),
                                   np.array([1.0]), uni)
    assert math.isfinite(value)
    with pytest.warns(ProbabilityUnderflow):
        grad = score(np.zeros(1), contexts, np.array([2.0]), np.array([1.0]), uni)
    assert np.all(np.isfinite(grad))


def test_nll_requires_records(gaussian):
    with pytest.raises(ValueError):
        neg_log_likelihood(np.zeros(2), np.empty((0, 2)), np.empty(0), np.empty(0),
                           gaussian)
    with pytest.raises(DimensionMismatch):
        neg_log_likelihood(np.zeros(3), np.ones((2, 2)), np.ones(2), np.ones(2),
                           gaussian)
