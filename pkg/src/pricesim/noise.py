"""Noise distribution families for demand uncertainty.

Five families are supported: Gaussian, Laplace, uniform, Cauchy, and a
deterministic periodic process ``eta_t = sin(omega * t)``.  Distributional
families expose CDF/PDF evaluation plus the first/second derivatives of
``log F`` and ``log(1 - F)`` needed by the likelihood, the pricing map, and
the regularization schedule.  The periodic process only supports sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr, ndtr

from .errors import ConfigInvalid, NotADistribution, UnboundedSteepness

GAUSSIAN = "gaussian"
LAPLACE = "laplace"
PERIODIC = "periodic"
CAUCHY = "cauchy"
UNIFORM = "uniform"

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Families whose steepness/flatness constants are finite on a bounded domain.
_LOG_CONCAVE_BOUNDED = (GAUSSIAN, LAPLACE)


@dataclass(frozen=True)
class NoiseModel:
    """Immutable tagged noise specification: family name plus parameters."""

    family: str
    params: tuple[float, ...]

    @staticmethod
    def gaussian(mu: float = 0.0, sigma: float = 1.0) -> "NoiseModel":
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        return NoiseModel(GAUSSIAN, (float(mu), float(sigma)))

    @staticmethod
    def laplace(mu: float = 0.0, b: float = 1.0) -> "NoiseModel":
        if b <= 0:
            raise ValueError("b must be positive")
        return NoiseModel(LAPLACE, (float(mu), float(b)))

    @staticmethod
    def periodic(omega: float = 0.01) -> "NoiseModel":
        return NoiseModel(PERIODIC, (float(omega),))

    @staticmethod
    def cauchy(x0: float = 0.0, gamma: float = 1.0) -> "NoiseModel":
        if gamma <= 0:
            raise ValueError("gamma must be positive")
        return NoiseModel(CAUCHY, (float(x0), float(gamma)))

    @staticmethod
    def uniform(a: float = 0.0, b: float = 1.0) -> "NoiseModel":
        if b <= a:
            raise ValueError("need a < b")
        return NoiseModel(UNIFORM, (float(a), float(b)))

    # -- configuration (tagged record: family string + parameter map) --

    _PARAM_NAMES = {
        GAUSSIAN: ("mu", "sigma"),
        LAPLACE: ("mu", "b"),
        PERIODIC: ("omega",),
        CAUCHY: ("x0", "gamma"),
        UNIFORM: ("a", "b"),
    }

    @staticmethod
    def from_config(spec: dict) -> "NoiseModel":
        if not isinstance(spec, dict) or "family" not in spec:
            raise ConfigInvalid("noise spec must be a map with a 'family' key")
        family = spec["family"]
        names = NoiseModel._PARAM_NAMES.get(family)
        if names is None:
            raise ConfigInvalid(f"unknown noise family {family!r}")
        extra = set(spec) - {"family", *names}
        if extra:
            raise ConfigInvalid(f"unknown noise parameter(s) {sorted(extra)} for {family!r}")
        ctor = getattr(NoiseModel, family)
        try:
            return ctor(**{k: spec[k] for k in names if k in spec})
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(f"bad parameters for noise family {family!r}: {exc}") from exc

    def as_config(self) -> dict:
        names = self._PARAM_NAMES[self.family]
        return {"family": self.family, **dict(zip(names, self.params))}

    def tag(self) -> str:
        """Compact identifier used in scenario ids, e.g. ``periodic-0.01``."""
        return "-".join([self.family] + [f"{p:g}" for p in self.params])

    # -- basic properties --

    @property
    def is_distribution(self) -> bool:
        return self.family != PERIODIC

    def _require_distribution(self):
        if not self.is_distribution:
            raise NotADistribution("the periodic process has no CDF/PDF")

    def support(self) -> tuple[float, float]:
        self._require_distribution()
        if self.family == UNIFORM:
            return self.params
        return (-math.inf, math.inf)

    # -- densities and log-probabilities (vectorized over x) --

    def cdf(self, x):
        self._require_distribution()
        x = np.asarray(x, dtype=float)
        if self.family == GAUSSIAN:
            mu, sigma = self.params
            return ndtr((x - mu) / sigma)
        if self.family == LAPLACE:
            mu, b = self.params
            z = (x - mu) / b
            return np.where(z < 0, 0.5 * np.exp(np.minimum(z, 0.0)),
                            1.0 - 0.5 * np.exp(-np.maximum(z, 0.0)))
        if self.family == UNIFORM:
            a, b = self.params
            return np.clip((x - a) / (b - a), 0.0, 1.0)
        x0, gamma = self.params
        z = (x - x0) / gamma
        # The arctan(1/z) identity keeps full relative precision in the left
        # tail, where 0.5 + arctan(z)/pi cancels catastrophically.
        with np.errstate(divide="ignore"):
            return np.where(z < 0, np.arctan(-1.0 / np.minimum(z, -1e-300)) / math.pi,
                            0.5 + np.arctan(np.maximum(z, 0.0)) / math.pi)

    def sf(self, x):
        self._require_distribution()
        x = np.asarray(x, dtype=float)
        if self.family == GAUSSIAN:
            mu, sigma = self.params
            return ndtr(-(x - mu) / sigma)
        if self.family == CAUCHY:
            x0, gamma = self.params
            z = (x - x0) / gamma
            with np.errstate(divide="ignore"):
                return np.where(z > 0, np.arctan(1.0 / np.maximum(z, 1e-300)) / math.pi,
                                0.5 + np.arctan(-np.minimum(z, 0.0)) / math.pi)
        return 1.0 - self.cdf(x)

    def pdf(self, x):
        self._require_distribution()
        x = np.asarray(x, dtype=float)
        if self.family == GAUSSIAN:
            mu, sigma = self.params
            z = (x - mu) / sigma
            return np.exp(-0.5 * z * z - _LOG_SQRT_2PI) / sigma
        if self.family == LAPLACE:
            mu, b = self.params
            return np.exp(-np.abs(x - mu) / b) / (2.0 * b)
        if self.family == UNIFORM:
            a, b = self.params
            inside = (x >= a) & (x <= b)
            return np.where(inside, 1.0 / (b - a), 0.0)
        x0, gamma = self.params
        z = (x - x0) / gamma
        return 1.0 / (math.pi * gamma * (1.0 + z * z))

    def logcdf(self, x):
        self._require_distribution()
        x = np.asarray(x, dtype=float)
        if self.family == GAUSSIAN:
            mu, sigma = self.params
            return log_ndtr((x - mu) / sigma)
        if self.family == LAPLACE:
            mu, b = self.params
            z = (x - mu) / b
            return np.where(z < 0, np.minimum(z, 0.0) + math.log(0.5),
                            np.log1p(-0.5 * np.exp(-np.maximum(z, 0.0))))
        with np.errstate(divide="ignore"):
            return np.log(self.cdf(x))

    def logsf(self, x):
        self._require_distribution()
        x = np.asarray(x, dtype=float)
        if self.family == GAUSSIAN:
            mu, sigma = self.params
            return log_ndtr(-(x - mu) / sigma)
        if self.family == LAPLACE:
            mu, b = self.params
            z = (x - mu) / b
            return np.where(z > 0, -np.maximum(z, 0.0) + math.log(0.5),
                            np.log1p(-0.5 * np.exp(np.minimum(z, 0.0))))
        with np.errstate(divide="ignore"):
            return np.log(self.sf(x))

    # -- derivatives of log F and log(1 - F) --

    def reversed_hazard(self, x):
        """f(x)/F(x), the derivative of log F."""
        self._require_distribution()
        x = np.asarray(x, dtype=float)
        if self.family == GAUSSIAN:
            mu, sigma = self.params
            z = (x - mu) / sigma
            return np.exp(-0.5 * z * z - _LOG_SQRT_2PI - log_ndtr(z)) / sigma
        if self.family == LAPLACE:
            mu, b = self.params
            z = (x - mu) / b
            e = np.exp(-np.maximum(z, 0.0))
            return np.where(z < 0, 1.0 / b, e / (b * (2.0 - e)))
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.pdf(x) / self.cdf(x)

    def hazard(self, x):
        """f(x)/(1 - F(x)), the negated derivative of log(1 - F)."""
        self._require_distribution()
        x = np.asarray(x, dtype=float)
        if self.family == GAUSSIAN:
            mu, sigma = self.params
            z = (x - mu) / sigma
            return np.exp(-0.5 * z * z - _LOG_SQRT_2PI - log_ndtr(-z)) / sigma
        if self.family == LAPLACE:
            mu, b = self.params
            z = (x - mu) / b
            e = np.exp(np.minimum(z, 0.0))
            return np.where(z > 0, 1.0 / b, e / (b * (2.0 - e)))
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.pdf(x) / self.sf(x)

    def neg_d2_logcdf(self, x):
        """-(log F)''(x); positive everywhere for log-concave F."""
        self._require_distribution()
        x = np.asarray(x, dtype=float)
        if self.family == GAUSSIAN:
            mu, sigma = self.params
            z = (x - mu) / sigma
            r = np.exp(-0.5 * z * z - _LOG_SQRT_2PI - log_ndtr(z))
            return (r * r + z * r) / (sigma * sigma)
        if self.family == LAPLACE:
            # log F is exactly linear below the location parameter.
            mu, b = self.params
            z = (x - mu) / b
            q = 0.5 * np.exp(-np.maximum(z, 0.0))
            return np.where(z > 0, q / (b * b * (1.0 - q) ** 2), 0.0)
        if self.family == UNIFORM:
            a, b = self.params
            with np.errstate(divide="ignore"):
                return np.where((x > a) & (x <= b), 1.0 / (x - a) ** 2, np.inf)
        x0, gamma = self.params
        f = self.pdf(x)
        z = (x - x0) / gamma
        fprime = -2.0 * z / (math.pi * gamma * gamma * (1.0 + z * z) ** 2)
        big_f = self.cdf(x)
        return (f * f - fprime * big_f) / (big_f * big_f)

    def neg_d2_logsf(self, x):
        """-(log(1 - F))''(x); positive everywhere for log-concave F."""
        self._require_distribution()
        x = np.asarray(x, dtype=float)
        if self.family == GAUSSIAN:
            mu, sigma = self.params
            z = (x - mu) / sigma
            h = np.exp(-0.5 * z * z - _LOG_SQRT_2PI - log_ndtr(-z))
            return (h * h - z * h) / (sigma * sigma)
        if self.family == LAPLACE:
            mu, b = self.params
            z = (x - mu) / b
            q = 0.5 * np.exp(np.minimum(z, 0.0))
            return np.where(z < 0, q / (b * b * (1.0 - q) ** 2), 0.0)
        if self.family == UNIFORM:
            a, b = self.params
            with np.errstate(divide="ignore"):
                return np.where((x >= a) & (x < b), 1.0 / (b - x) ** 2, np.inf)
        x0, gamma = self.params
        f = self.pdf(x)
        z = (x - x0) / gamma
        fprime = -2.0 * z / (math.pi * gamma * gamma * (1.0 + z * z) ** 2)
        s = self.sf(x)
        return (f * f + fprime * s) / (s * s)

    # -- sampling --

    def deterministic_value(self, t):
        """Noise value at decision index t for the periodic process."""
        if self.family != PERIODIC:
            raise NotADistribution("only the periodic process is deterministic")
        return np.sin(self.params[0] * np.asarray(t, dtype=float))

    def sample(self, t, rng: np.random.Generator | None = None):
        """Draw eta_t: an iid draw for distributional families, sin(omega*t)
        for the periodic process.  ``t`` may be a scalar index or an array of
        indices (one draw per index)."""
        if self.family == PERIODIC:
            return self.deterministic_value(t)
        if rng is None:
            raise ValueError("distributional families need a random generator")
        size = np.shape(t) if np.ndim(t) > 0 else None
        if self.family == GAUSSIAN:
            mu, sigma = self.params
            return rng.normal(mu, sigma, size=size)
        if self.family == LAPLACE:
            mu, b = self.params
            return rng.laplace(mu, b, size=size)
        if self.family == UNIFORM:
            a, b = self.params
            return rng.uniform(a, b, size=size)
        x0, gamma = self.params
        return x0 + gamma * rng.standard_cauchy(size=size)


@dataclass(frozen=True)
class LogConcavityConstants:
    """Steepness/flatness bounds of log F and log(1-F) over |x| <= 3W."""

    u_w: float
    l_w: float
    domain_radius: float


def _golden_section(f, lo: float, hi: float, tol: float = 1e-8) -> float:
    """Return the extremal value of f found by golden-section search on
    [lo, hi] (f is minimized; pass a negated function to maximize)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    best = min(fc, fd)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        best = min(best, fc, fd)
    return best


_GRID_POINTS = 10_000


def steepness(model: NoiseModel, w_budget: float) -> float:
    """Sup over |x| <= 3W of max{f/F, f/(1-F)}: the largest slope of
    log F and -log(1-F), which bounds the per-record score magnitude.

    Grid search over 10^4 points refined by golden-section around the best
    bracket.  Only finite for the Gaussian and Laplace families.
    """
    _check_constants_defined(model)
    if w_budget <= 0:
        raise ValueError("W must be positive")
    radius = 3.0 * w_budget
    grid = np.linspace(-radius, radius, _GRID_POINTS)
    vals = np.maximum(model.reversed_hazard(grid), model.hazard(grid))
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, _GRID_POINTS - 1)]

    def neg_ratio(x):
        return -max(float(model.reversed_hazard(x)), float(model.hazard(x)))

    refined = -_golden_section(neg_ratio, lo, hi)
    return max(float(vals[i]), refined)


def flatness(model: NoiseModel, w_budget: float) -> float:
    """Inf over |x| <= 3W of min{-(log F)'', -(log(1-F))''}: the smallest
    curvature of the log probabilities, which lower-bounds the strong
    convexity of the likelihood.  Zero for the Laplace family (log F is
    exactly linear on one side of the location parameter)."""
    _check_constants_defined(model)
    if w_budget <= 0:
        raise ValueError("W must be positive")
    radius = 3.0 * w_budget
    grid = np.linspace(-radius, radius, _GRID_POINTS)
    vals = np.minimum(model.neg_d2_logcdf(grid), model.neg_d2_logsf(grid))
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, _GRID_POINTS - 1)]

    def curvature(x):
        return min(float(model.neg_d2_logcdf(x)), float(model.neg_d2_logsf(x)))

    refined = _golden_section(curvature, lo, hi)
    return min(float(vals[i]), refined)


def log_concavity_constants(model: NoiseModel, w_budget: float) -> LogConcavityConstants:
    return LogConcavityConstants(
        u_w=steepness(model, w_budget),
        l_w=flatness(model, w_budget),
        domain_radius=3.0 * w_budget,
    )


def _check_constants_defined(model: NoiseModel):
    model._require_distribution()
    if model.family == UNIFORM:
        raise UnboundedSteepness("f/F diverges at the uniform support boundary")
    if model.family == CAUCHY:
        raise UnboundedSteepness("the Cauchy family is not log-concave; "
                                 "constants are undefined")
