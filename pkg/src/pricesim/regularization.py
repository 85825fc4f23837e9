"""Empirical covariance tracking and the online regularization schedule.

The schedule couples the steepness of the assumed noise, the running
covariance of observed contexts, and a confidence budget alpha:

    lam_t(alpha) = c * 4 u_W * sqrt(2 t^-1 ||diag(Sigma_t)||_inf ln(2d/alpha))

It can equivalently be advanced by a one-step recurrence; both forms are
implemented and must agree to 1e-9 relative error over long trajectories.
The recurrence uses the diagonal sup norm throughout so that it reproduces
the closed form exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateCovariance, DimensionMismatch


def update_covariance(prev: np.ndarray, x: np.ndarray, t: int) -> np.ndarray:
    """One-step update of the context covariance average.

    ``prev`` is the average over the first t-1 contexts (the zero matrix for
    t = 1); the result averages over t contexts.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    x = np.asarray(x, dtype=float)
    prev = np.asarray(prev, dtype=float)
    if prev.shape != (x.shape[0], x.shape[0]):
        raise DimensionMismatch(
            f"covariance shape {prev.shape} does not match context length {x.shape[0]}")
    return ((t - 1) * prev + np.outer(x, x)) / t


def lambda_closed_form(t: int, sigma_hat: np.ndarray, u_w: float, d: int,
                       alpha: float, c_lambda: float = 1.0) -> float:
    """Closed-form schedule value at decision index t."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    diag_sup = float(np.max(np.diag(np.asarray(sigma_hat, dtype=float))))
    if diag_sup <= 0.0:
        raise DegenerateCovariance("||diag(Sigma)||_inf is zero")
    return c_lambda * 4.0 * u_w * math.sqrt(2.0 * diag_sup * math.log(2.0 * d / alpha) / t)


def lambda_incremental(lam_prev: float, t: int, diag_sup_t: float,
                       diag_sup_prev: float) -> float:
    """One-step recurrence lam_t = lam_{t-1} sqrt((1 - 1/t) m_t / m_{t-1})."""
    if t < 2:
        raise ValueError("the recurrence starts at t = 2")
    if diag_sup_prev <= 0.0 or diag_sup_t <= 0.0:
        raise DegenerateCovariance("diagonal sup norm must stay positive")
    return lam_prev * math.sqrt((1.0 - 1.0 / t) * diag_sup_t / diag_sup_prev)


class OnlineRegularization:
    """Per-trajectory schedule state: covariance, t, and the current level.

    The covariance is kept as a running sum and divided on demand, which
    makes the incremental average agree with a batch recomputation to
    rounding error regardless of trajectory length.  Single writer per
    trajectory; snapshots returned by properties are copies.
    """

    def __init__(self, d: int, u_w: float, alpha: float, c_lambda: float = 1.0):
        if not 0.0 < alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        self.d = d
        self.u_w = float(u_w)
        self.alpha = float(alpha)
        self.c_lambda = float(c_lambda)
        self.t = 0
        self._sum = np.zeros((d, d))
        self._diag_sup = 0.0
        self.lam = math.nan

    def observe(self, x: np.ndarray) -> float:
        """Fold in context x_t and return lam_t."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            raise DimensionMismatch(f"expected context of length {self.d}")
        self._sum += np.outer(x, x)
        self.t += 1
        diag_sup = float(np.max(np.diag(self._sum))) / self.t
        if self.t == 1:
            if diag_sup <= 0.0:
                raise DegenerateCovariance("first context is the zero vector")
            self.lam = lambda_closed_form(1, self.sigma_hat, self.u_w, self.d,
                                          self.alpha, self.c_lambda)
        else:
            self.lam = lambda_incremental(self.lam, self.t, diag_sup, self._diag_sup)
        self._diag_sup = diag_sup
        return self.lam

    @property
    def sigma_hat(self) -> np.ndarray:
        if self.t == 0:
            return np.zeros((self.d, self.d))
        return self._sum / self.t

    @property
    def diag_sup(self) -> float:
        return self._diag_sup
