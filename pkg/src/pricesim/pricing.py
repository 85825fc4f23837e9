"""Virtual valuation pricing: phi, its numerical inverse, and g.

For a noise CDF F with density f the virtual valuation is

    phi(v) = v - (1 - F(v)) / f(v),

strictly increasing when F is log-concave.  The revenue-maximizing posted
price for expected valuation v is g(v) = v + phi^{-1}(-v): the first-order
condition of p * (1 - F(p - v)) in p is exactly phi(p - v) = -v.

The inverse is computed by a monotone lookup table over the evaluation
domain (built once at construction) plus safeguarded Newton/bisection
refinement inside the bracketing cell; queries beyond the table fall back
to an expanding-bracket search.  Table-based and direct inversion agree to
well below 1e-8.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BracketingFailure, NotADistribution, ZeroDensity
from .noise import NoiseModel, PERIODIC


class PricingFunction:
    """Immutable price map for one assumed noise model.

    Thread-safe after construction; the lookup table is never mutated.
    """

    def __init__(self, noise: NoiseModel, root_tolerance: float = 1e-10,
                 bracket_expansion: float = 2.0, table_points: int = 4001):
        if not noise.is_distribution:
            raise NotADistribution("pricing requires a distributional noise family")
        if root_tolerance <= 0 or bracket_expansion <= 1.0:
            raise ValueError("need root_tolerance > 0 and bracket_expansion > 1")
        self.noise = noise
        self.root_tolerance = float(root_tolerance)
        self.bracket_expansion = float(bracket_expansion)
        lo, hi = noise.support()
        if math.isinf(lo):
            lo = -12.0 * _scale(noise)
        else:
            lo = lo + (hi - lo) * 1e-12
        if math.isinf(hi):
            hi = 12.0 * _scale(noise)
        else:
            hi = hi - (noise.support()[1] - noise.support()[0]) * 1e-12
        self._xgrid = np.linspace(lo, hi, table_points)
        self._ygrid = self.virtual_valuation(self._xgrid)
        if np.any(np.diff(self._ygrid) <= 0.0):
            raise BracketingFailure(
                f"virtual valuation is not strictly increasing for {noise.family!r}; "
                "the price map is undefined for this family")

    # -- phi and its derivative --

    def virtual_valuation(self, v):
        """phi(v) = v - (1 - F(v))/f(v)."""
        v = np.asarray(v, dtype=float)
        f = self.noise.pdf(v)
        if np.any(f <= 0.0):
            raise ZeroDensity("phi is undefined where the density vanishes")
        hazard = self.noise.hazard(v)
        return v - 1.0 / hazard

    def _phi_derivative(self, v):
        # phi' = 1 + h'/h^2 with h the hazard; h' = -(log(1-F))''.
        h = self.noise.hazard(v)
        return 1.0 + self.noise.neg_d2_logsf(v) / (h * h)

    # -- inversion --

    def inverse_virtual_valuation(self, y, use_table: bool = True):
        """Solve phi(x) = y to |phi(x) - y| <= root_tolerance.

        Accepts scalars or arrays.  ``use_table=False`` forces the direct
        expanding-bracket bisection for every query (used to cross-check the
        table path).
        """
        y_arr = np.atleast_1d(np.asarray(y, dtype=float))
        flat = y_arr.reshape(-1)
        out = np.empty_like(flat)
        if use_table:
            inside = (flat >= self._ygrid[0]) & (flat <= self._ygrid[-1])
        else:
            inside = np.zeros(flat.shape, dtype=bool)
        if np.any(inside):
            out[inside] = self._refine_in_cells(flat[inside])
        for idx in np.nonzero(~inside)[0]:
            out[idx] = self._invert_direct(float(flat[idx]))
        return out.reshape(y_arr.shape) if np.ndim(y) else float(out[0])

    def optimal_price(self, v):
        """g(v) = v + phi^{-1}(-v); accepts scalars or arrays."""
        v = np.asarray(v, dtype=float)
        return v + self.inverse_virtual_valuation(-v)

    def _refine_in_cells(self, y):
        j = np.clip(np.searchsorted(self._ygrid, y), 1, len(self._ygrid) - 1)
        lo = self._xgrid[j - 1].copy()
        hi = self._xgrid[j].copy()
        x = 0.5 * (lo + hi)
        tol = self.root_tolerance
        for _ in range(120):
            fx = self.virtual_valuation(x) - y
            done = np.abs(fx) <= tol
            width_ok = (hi - lo) <= 1e-13 * np.maximum(1.0, np.abs(x))
            if np.all(done | width_ok):
                break
            above = fx > 0
            hi = np.where(above, x, hi)
            lo = np.where(above, lo, x)
            with np.errstate(divide="ignore", invalid="ignore"):
                newton = x - fx / self._phi_derivative(x)
            fallback = 0.5 * (lo + hi)
            newton = np.where(np.isfinite(newton) & (newton > lo) & (newton < hi),
                              newton, fallback)
            x = np.where(done, x, newton)
        return x

    def _invert_direct(self, y: float) -> float:
        lo_support, hi_support = self.noise.support()
        lo, hi = float(self._xgrid[0]), float(self._xgrid[-1])
        phi_lo = float(self.virtual_valuation(lo))
        phi_hi = float(self.virtual_valuation(hi))
        # Expand the bracket toward the support edges until it straddles y.
        # Expansion is capped: far outside the table domain the subtraction
        # inside phi cancels catastrophically, so hits out there are float
        # artifacts, not roots, and the query is treated as unattainable.
        cap = 1e6 * max(abs(lo), abs(hi), 1.0)
        width = hi - lo
        for _ in range(60):
            if phi_lo <= y <= phi_hi:
                break
            width *= self.bracket_expansion
            if y < phi_lo:
                lo = max(lo - width, -cap) if math.isinf(lo_support) \
                    else max(lo - width, float(self._xgrid[0]))
                phi_lo = float(self.virtual_valuation(lo))
            else:
                hi = min(hi + width, cap) if math.isinf(hi_support) \
                    else min(hi + width, float(self._xgrid[-1]))
                phi_hi = float(self.virtual_valuation(hi))
        if not phi_lo <= y <= phi_hi:
            # At a finite support edge the bracket cannot grow; queries that
            # miss the attainable range by no more than the root tolerance
            # snap to that edge (exact-boundary valuations land here).
            if math.isfinite(lo_support) and abs(y - phi_lo) <= self.root_tolerance:
                return lo
            if math.isfinite(hi_support) and abs(y - phi_hi) <= self.root_tolerance:
                return hi
            raise BracketingFailure(
                f"no sign change for y={y:.6g}: phi range explored was "
                f"[{phi_lo:.6g}, {phi_hi:.6g}]")
        arr = self._bisect_newton(np.array([lo]), np.array([hi]), np.array([y]))
        root = float(arr[0])
        residual = abs(float(self.virtual_valuation(root)) - y)
        if residual > 1e3 * self.root_tolerance * max(1.0, abs(root)):
            raise BracketingFailure(
                f"root search stalled at x={root:.6g} with residual {residual:.3g}")
        return root

    def _bisect_newton(self, lo, hi, y):
        x = 0.5 * (lo + hi)
        tol = self.root_tolerance
        for _ in range(200):
            fx = self.virtual_valuation(x) - y
            done = np.abs(fx) <= tol
            width_ok = (hi - lo) <= 1e-13 * np.maximum(1.0, np.abs(x))
            if np.all(done | width_ok):
                break
            above = fx > 0
            hi = np.where(above, x, hi)
            lo = np.where(above, lo, x)
            with np.errstate(divide="ignore", invalid="ignore"):
                newton = x - fx / self._phi_derivative(x)
            fallback = 0.5 * (lo + hi)
            newton = np.where(np.isfinite(newton) & (newton > lo) & (newton < hi),
                              newton, fallback)
            x = np.where(done, x, newton)
        return x


def _scale(noise: NoiseModel) -> float:
    """Rough dispersion used to size the inversion table domain."""
    if noise.family == "gaussian":
        mu, sigma = noise.params
        return max(1.0, abs(mu) + sigma)
    if noise.family == "laplace":
        mu, b = noise.params
        return max(1.0, abs(mu) + b)
    if noise.family == "cauchy":
        x0, gamma = noise.params
        return max(1.0, abs(x0) + gamma)
    return 1.0


def expected_revenue(noise_true: NoiseModel, theta, x, price: float,
                     t: int | None = None) -> float:
    """Expected revenue p * P(V >= p) of posting ``price`` for context x.

    For distributional noise this is p * (1 - F(p - <theta, x>)).  The
    periodic process is deterministic, so the revenue is the indicator form
    p * 1{<theta, x> + sin(omega t) >= p} and requires the decision index t.
    """
    v = float(np.asarray(theta, dtype=float) @ np.asarray(x, dtype=float))
    return expected_revenue_at_value(noise_true, v, price, t)


def expected_revenue_at_value(noise_true: NoiseModel, v: float, price,
                              t=None):
    """Same as expected_revenue but taking the valuation mean directly."""
    price = np.asarray(price, dtype=float)
    if noise_true.family == PERIODIC:
        if t is None:
            raise ValueError("periodic revenue needs the decision index t")
        eta = noise_true.deterministic_value(t)
        result = price * (v + eta >= price)
    else:
        result = price * noise_true.sf(price - v)
    return result if result.ndim else float(result)
