"""Pricing policies: the online-regularized learner, the episodic
doubling-trick baseline, and the oracle that knows the true demand vector.

All policies share the same surface: ``price(x)`` returns the posted price
for a context and ``update(x, p, y)`` folds in the observed transaction.
One policy instance owns one trajectory; nothing is shared across
trajectories, so replicates can run in parallel freely.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .choice import score_increments
from .noise import NoiseModel, steepness
from .pricing import PricingFunction
from .regularization import OnlineRegularization
from .solver import SolverSettings, solve

OORMLP = "oormlp"
RMLP = "rmlp"
ORACLE = "oracle"
POLICY_NAMES = (OORMLP, RMLP, ORACLE)


@lru_cache(maxsize=None)
def pricing_for(noise: NoiseModel) -> PricingFunction:
    """Shared immutable price map per noise model."""
    return PricingFunction(noise)


@lru_cache(maxsize=None)
def steepness_for(noise: NoiseModel, w_budget: float) -> float:
    return steepness(noise, w_budget)


class TransactionLog:
    """Growable columnar store of (context, price, outcome) triples."""

    def __init__(self, d: int, capacity: int = 64):
        self.d = d
        self.t = 0
        self._contexts = np.empty((capacity, d))
        self._prices = np.empty(capacity)
        self._outcomes = np.empty(capacity)

    def append(self, x, p: float, y: int):
        if self.t == len(self._prices):
            grow = max(64, self.t)
            self._contexts = np.concatenate(
                [self._contexts, np.empty((grow, self.d))])
            self._prices = np.concatenate([self._prices, np.empty(grow)])
            self._outcomes = np.concatenate([self._outcomes, np.empty(grow)])
        self._contexts[self.t] = x
        self._prices[self.t] = p
        self._outcomes[self.t] = y
        self.t += 1

    def view(self, start: int = 0, stop: int | None = None):
        stop = self.t if stop is None else stop
        return (self._contexts[start:stop], self._prices[start:stop],
                self._outcomes[start:stop])


class PricingPolicy:
    """Base interface; subclasses keep per-trajectory state."""

    def price(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def update(self, x: np.ndarray, p: float, y: int) -> None:
        raise NotImplementedError

    @property
    def theta_hat(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def current_lambda(self) -> float:
        raise NotImplementedError


class OORMLPPolicy(PricingPolicy):
    """Optimistic online-regularized maximum-likelihood pricing.

    Every decision point re-solves the l1-penalized likelihood over the full
    history with the schedule level for that point, warm-started from the
    previous solution.  The first price is posted from the zero estimate
    (no information yet), so it equals the no-information monopoly price.
    """

    def __init__(self, d: int, w_budget: float, alpha: float,
                 c_lambda: float = 1.0,
                 noise_assumed: NoiseModel | None = None,
                 solver_settings: SolverSettings | None = None,
                 solve_every: int = 1, capacity: int = 64):
        if solve_every < 1:
            raise ValueError("solve_every must be >= 1")
        self.d = d
        self.w_budget = float(w_budget)
        self.noise = noise_assumed or NoiseModel.gaussian()
        self.settings = solver_settings or SolverSettings()
        self.solve_every = solve_every
        self.pricing = pricing_for(self.noise)
        self.u_w = steepness_for(self.noise, self.w_budget)
        self.schedule = OnlineRegularization(d, self.u_w, alpha, c_lambda)
        self.log = TransactionLog(d, capacity)
        self._theta = np.zeros(d)
        self.last_result = None

    def price(self, x) -> float:
        return float(self.pricing.optimal_price(float(self._theta @ x)))

    def update(self, x, p, y) -> None:
        self.log.append(x, p, y)
        lam = self.schedule.observe(x)
        t = self.log.t
        if t == 1 or t % self.solve_every == 0:
            contexts, prices, outcomes = self.log.view()
            init = self._theta if self.settings.warm_start else None
            result = solve(contexts, prices, outcomes, lam, self.w_budget,
                           self.noise, theta_init=init, settings=self.settings)
            self._theta = result.theta
            self.last_result = result

    @property
    def theta_hat(self) -> np.ndarray:
        return self._theta

    @property
    def current_lambda(self) -> float:
        return self.schedule.lam


class RMLPPolicy(PricingPolicy):
    """Doubling-trick baseline: episode k covers decision points
    [2^k, 2^{k+1}).  At each episode boundary the estimate is refit from
    scratch using only the previous episode's records, with the same
    schedule formula evaluated on that episode's covariance, and is then
    frozen for the whole episode.  Episode 0 prices from the zero estimate.
    """

    def __init__(self, d: int, w_budget: float, alpha: float,
                 c_lambda: float = 1.0,
                 noise_assumed: NoiseModel | None = None,
                 solver_settings: SolverSettings | None = None,
                 capacity: int = 64):
        self.d = d
        self.w_budget = float(w_budget)
        self.alpha = float(alpha)
        self.c_lambda = float(c_lambda)
        self.noise = noise_assumed or NoiseModel.gaussian()
        self.settings = solver_settings or SolverSettings()
        self.pricing = pricing_for(self.noise)
        self.u_w = steepness_for(self.noise, self.w_budget)
        self.log = TransactionLog(d, capacity)
        self._theta = np.zeros(d)
        self._lam = 0.0
        self.refit_times = []

    def price(self, x) -> float:
        # The learning stage runs when the pricing query arrives: entering
        # episode k (decision point 2^k) refits on episode k-1 only.
        t = self.log.t + 1
        if t >= 2 and (t & (t - 1)) == 0 and t not in self.refit_times[-1:]:
            self._refit(episode_length=t // 2)
            self.refit_times.append(t)
        return float(self.pricing.optimal_price(float(self._theta @ x)))

    def update(self, x, p, y) -> None:
        self.log.append(x, p, y)

    def _refit(self, episode_length: int):
        # Previous episode occupies decision points [tau, 2*tau), i.e. the
        # most recent tau records.
        tau = episode_length
        contexts, prices, outcomes = self.log.view(start=self.log.t - tau)
        diag_sup = float(np.max(np.mean(contexts * contexts, axis=0)))
        self._lam = (self.c_lambda * 4.0 * self.u_w
                     * math.sqrt(2.0 * diag_sup * math.log(2.0 * self.d / self.alpha) / tau))
        result = solve(contexts, prices, outcomes, self._lam, self.w_budget,
                       self.noise, theta_init=None, settings=self.settings)
        self._theta = result.theta

    @property
    def theta_hat(self) -> np.ndarray:
        return self._theta

    @property
    def current_lambda(self) -> float:
        return self._lam


class OraclePolicy(PricingPolicy):
    """Posts the revenue-maximizing price from the true demand vector."""

    def __init__(self, theta0, pricing: PricingFunction):
        self.theta0 = np.asarray(theta0, dtype=float)
        self.pricing = pricing

    def price(self, x) -> float:
        return float(self.pricing.optimal_price(float(self.theta0 @ x)))

    def update(self, x, p, y) -> None:
        pass

    @property
    def theta_hat(self) -> np.ndarray:
        return self.theta0

    @property
    def current_lambda(self) -> float:
        return 0.0


def score_sup_norm_series(theta0, contexts, prices, outcomes,
                          noise: NoiseModel) -> np.ndarray:
    """||grad L_t(theta0)||_inf for every prefix t of a trajectory."""
    weights = score_increments(theta0, contexts, prices, outcomes, noise)
    partial = np.cumsum(weights[:, None] * np.asarray(contexts, dtype=float), axis=0)
    t = np.arange(1, len(prices) + 1)
    return np.max(np.abs(partial), axis=1) / t
