"""Linear valuation choice model: sale outcomes and their likelihood.

A customer with willingness-to-pay ``V = <theta0, x> + eta`` buys iff the
posted price does not exceed V.  The observable is the binary sale status
``y in {-1, +1}``; its log-likelihood under a candidate theta only involves
the noise CDF at the residual ``u = p - <theta, x>``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr

from .errors import DimensionMismatch, ProbabilityUnderflow
from .noise import NoiseModel

# Sale probabilities are clamped at this floor before taking logs, so a
# badly misspecified run (e.g. Cauchy data under a Gaussian likelihood)
# cannot produce an infinite loss.
PROB_FLOOR = 1e-300
_LOG_FLOOR = math.log(PROB_FLOOR)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class TransactionRecord:
    """One decision point: context, posted price, and sale status."""

    x: np.ndarray
    p: float
    y: int

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        object.__setattr__(self, "x", x)
        if x.ndim != 1:
            raise DimensionMismatch("context must be a 1-d vector")
        if np.max(np.abs(x)) > 1.0 + 1e-12:
            raise ValueError("context entries must satisfy |x_i| <= 1")
        if self.y not in (-1, 1):
            raise ValueError("sale status must be -1 or +1")


@dataclass(frozen=True)
class DemandParameter:
    """Candidate demand vector together with its sparsity/l1 budgets."""

    theta: np.ndarray
    s0: int
    w_budget: float

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        object.__setattr__(self, "theta", theta)
        if self.s0 < 0 or self.w_budget <= 0:
            raise ValueError("need s0 >= 0 and W > 0")

    def in_model_space(self) -> bool:
        """Membership in {theta : ||theta||_0 <= s0, ||theta||_1 <= W}."""
        nonzeros = int(np.count_nonzero(self.theta))
        return nonzeros <= self.s0 and float(np.sum(np.abs(self.theta))) <= self.w_budget + 1e-12


def stack_records(records) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stack a sequence of TransactionRecord into (X, prices, outcomes)."""
    if len(records) == 0:
        raise ValueError("records must be nonempty")
    contexts = np.stack([r.x for r in records])
    prices = np.array([r.p for r in records], dtype=float)
    outcomes = np.array([r.y for r in records], dtype=float)
    return contexts, prices, outcomes


def willingness_to_pay(theta: np.ndarray, x: np.ndarray, eta: float) -> float:
    """V = <theta, x> + eta."""
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    if theta.shape != x.shape:
        raise DimensionMismatch(f"theta has shape {theta.shape}, context {x.shape}")
    return float(theta @ x) + float(eta)


def sale_status(v: float, p: float) -> int:
    """+1 iff the willingness-to-pay reaches the posted price (ties buy)."""
    return 1 if v >= p else -1


def _clamped_logprobs(noise: NoiseModel, residuals, outcomes):
    """Log sale probabilities log P(y_s | ...), clamped at the floor."""
    if noise.family == "gaussian":
        # Both outcome branches collapse into one evaluation: the sale log
        # probability is log Phi(-y * z) for standardized residual z.
        mu, sigma = noise.params
        logp = log_ndtr(-np.asarray(outcomes) * (residuals - mu) / sigma)
    else:
        logp = np.where(np.asarray(outcomes) > 0, noise.logsf(residuals),
                        noise.logcdf(residuals))
    if float(np.min(logp)) < _LOG_FLOOR:
        warnings.warn("sale probability below 1e-300 was clamped",
                      ProbabilityUnderflow, stacklevel=3)
        clamped = logp < _LOG_FLOOR
        return np.maximum(logp, _LOG_FLOOR), clamped
    return logp, None


def neg_log_likelihood(theta, contexts, prices, outcomes, noise: NoiseModel) -> float:
    """Averaged negative log-likelihood of the observed sale statuses."""
    u = _residuals(theta, contexts, prices)
    logp, _ = _clamped_logprobs(noise, u, outcomes)
    return float(-np.mean(logp))


def score(theta, contexts, prices, outcomes, noise: NoiseModel) -> np.ndarray:
    """Gradient of neg_log_likelihood with respect to theta."""
    return loss_and_score(theta, contexts, prices, outcomes, noise)[1]


def loss_and_score(theta, contexts, prices, outcomes, noise: NoiseModel):
    """Loss and gradient in one pass (shared by the solver)."""
    contexts = np.asarray(contexts, dtype=float)
    outcomes = np.asarray(outcomes, dtype=float)
    u = _residuals(theta, contexts, prices)
    logp, clamped = _clamped_logprobs(noise, u, outcomes)
    loss = float(-np.mean(logp))
    # d(-log p)/du is the hazard for a sale and the negated reversed hazard
    # for a pass; the chain rule through u = p - <theta, x> contributes -x.
    if noise.family == "gaussian":
        mu, sigma = noise.params
        z = (u - mu) / sigma
        dl_du = outcomes * np.exp(-0.5 * z * z - _LOG_SQRT_2PI - logp) / sigma
    else:
        dl_du = np.where(outcomes > 0, noise.hazard(u), -noise.reversed_hazard(u))
    if clamped is not None:
        dl_du = np.where(clamped, 0.0, dl_du)
    grad = -(contexts.T @ dl_du) / len(dl_du)
    return loss, grad


def score_increments(theta, contexts, prices, outcomes, noise: NoiseModel) -> np.ndarray:
    """Per-record slopes xi_s of the log probabilities at theta.

    The score decomposes as a weighted context average with weights bounded
    by the steepness constant whenever |u_s| <= 3W.
    """
    u = _residuals(theta, contexts, prices)
    return np.where(np.asarray(outcomes) > 0, noise.hazard(u), -noise.reversed_hazard(u))


def _residuals(theta, contexts, prices):
    theta = np.asarray(theta, dtype=float)
    contexts = np.asarray(contexts, dtype=float)
    prices = np.asarray(prices, dtype=float)
    if contexts.ndim != 2 or contexts.shape[1] != theta.shape[0]:
        raise DimensionMismatch(
            f"contexts shape {contexts.shape} incompatible with theta shape {theta.shape}")
    if len(prices) != contexts.shape[0]:
        raise DimensionMismatch("one price per context required")
    if len(prices) == 0:
        raise ValueError("records must be nonempty")
    return prices - contexts @ theta
