import math

import numpy as np
import pytest
from scipy.stats import norm

from pricesim import (NoiseModel, PricingFunction, expected_revenue,
                      expected_revenue_at_value)
from pricesim.errors import BracketingFailure, NotADistribution, ZeroDensity


@pytest.fixture(scope="module")
def gauss_pricing():
    return PricingFunction(NoiseModel.gaussian())


@pytest.fixture(scope="module")
def unit_uniform_pricing():
    return PricingFunction(NoiseModel.uniform(0, 1))


def _gauss_phi_oracle(x):
    # independent formula via scipy: phi(x) = x - sf(x)/pdf(x)
    return x - norm.sf(x) / norm.pdf(x)


def _bisect_oracle(fn, target, lo, hi, tol=1e-12):
    flo = fn(lo) - target
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = fn(mid) - target
        if abs(fmid) <= tol or (hi - lo) < 1e-15:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _grid_argmax_revenue(noise_sf, v, lo, hi, spacing=1e-3):
    p = np.arange(lo, hi, spacing)
    return float(p[np.argmax(p * noise_sf(p - v))])


def test_uniform_virtual_valuation_closed_form(unit_uniform_pricing):
    vs = np.linspace(0.05, 0.95, 19)
    assert np.allclose(unit_uniform_pricing.virtual_valuation(vs), 2 * vs - 1, atol=1e-12)
    assert unit_uniform_pricing.inverse_virtual_valuation(0.0) == pytest.approx(0.5, abs=1e-10)


def test_uniform_price_closed_form(unit_uniform_pricing):
    for v in np.linspace(0.0, 1.0, 25):
        assert float(unit_uniform_pricing.optimal_price(v)) == pytest.approx(
            (1 + v) / 2, abs=1e-10)


def test_gaussian_virtual_valuation_values(gauss_pricing):
    assert float(gauss_pricing.virtual_valuation(0.0)) == pytest.approx(
        -math.sqrt(math.pi / 2), rel=1e-12)
    assert 5.8 <= float(gauss_pricing.virtual_valuation(6.0)) <= 6.0
    xs = np.linspace(-6, 6, 101)
    assert np.allclose(gauss_pricing.virtual_valuation(xs), _gauss_phi_oracle(xs),
                       rtol=1e-10, atol=1e-10)


def test_gaussian_inverse_at_zero(gauss_pricing):
    root = _bisect_oracle(_gauss_phi_oracle, 0.0, 0.0, 2.0)
    assert root == pytest.approx(0.7517915, abs=1e-6)
    assert float(gauss_pricing.inverse_virtual_valuation(0.0)) == pytest.approx(
        root, abs=1e-9)
    # cross-check: the same point maximizes p * sf(p) on a fine grid
    grid_best = _grid_argmax_revenue(norm.sf, 0.0, 0.0, 3.0, 1e-5)
    assert float(gauss_pricing.optimal_price(0.0)) == pytest.approx(grid_best, abs=2e-5)


def test_inverse_round_trip(gauss_pricing):
    ys = np.linspace(-25.0, 7.0, 1000)
    xs = gauss_pricing.inverse_virtual_valuation(ys)
    assert np.max(np.abs(gauss_pricing.virtual_valuation(xs) - ys)) <= 1e-8
    # exact composition the other way
    y2 = float(gauss_pricing.virtual_valuation(2.0))
    assert float(gauss_pricing.inverse_virtual_valuation(y2)) == pytest.approx(2.0, abs=1e-9)


def test_table_and_direct_inversion_agree(gauss_pricing):
    ys = np.linspace(-12.0, 7.0, 333)
    with_table = gauss_pricing.inverse_virtual_valuation(ys)
    direct = gauss_pricing.inverse_virtual_valuation(ys, use_table=False)
    assert np.max(np.abs(with_table - direct)) <= 1e-8


def test_inversion_preserves_query_shape(unit_uniform_pricing):
    # 2-d query mixing in-table values with boundary values that resolve
    # through the direct path
    ys = np.array([[0.0, -1.0], [0.5, 1.0]])
    out = unit_uniform_pricing.inverse_virtual_valuation(ys)
    assert out.shape == (2, 2)
    assert out == pytest.approx(np.array([[0.5, 0.0], [0.75, 1.0]]), abs=1e-9)


def test_gaussian_price_matches_revenue_maximizer(gauss_pricing):
    for v in np.linspace(-3, 3, 15):
        best = _grid_argmax_revenue(norm.sf, v, v - 2.0, v + 6.0)
        assert float(gauss_pricing.optimal_price(v)) == pytest.approx(best, abs=1e-3)


def test_large_valuation_price_tracks_grid_oracle(gauss_pricing):
    # Far above the noise scale the maximizer sits below the valuation by
    # roughly sqrt(2 log v); the grid oracle is authoritative.
    best = _grid_argmax_revenue(norm.sf, 10.0, 6.0, 12.0, 1e-4)
    assert float(gauss_pricing.optimal_price(10.0)) == pytest.approx(best, abs=1e-3)


def test_price_map_is_1_lipschitz(gauss_pricing, rng):
    vs = rng.uniform(-4, 4, size=(1000, 2))
    prices = gauss_pricing.optimal_price(vs)
    gaps = np.abs(prices[:, 0] - prices[:, 1])
    assert np.all(gaps <= np.abs(vs[:, 0] - vs[:, 1]) + 1e-6)


def test_virtual_valuation_monotone():
    xs = np.linspace(-6, 6, 500)
    for model in (NoiseModel.gaussian(), NoiseModel.laplace()):
        vals = PricingFunction(model).virtual_valuation(xs)
        assert np.all(np.diff(vals) > 0)


def test_laplace_flat_price_region():
    # For unit Laplace noise the monopoly price is exactly 1 for any
    # valuation below 1: phi^{-1}(-v) = 1 - v on that branch.
    pricing = PricingFunction(NoiseModel.laplace())
    for v in (-2.0, -0.5, 0.0, 0.7, 1.0):
        assert float(pricing.optimal_price(v)) == pytest.approx(1.0, abs=1e-9)


def test_expected_revenue_values():
    uni = NoiseModel.uniform(0, 1)
    theta = np.array([0.0, 0.0])
    x = np.array([0.3, -0.3])
    assert expected_revenue(uni, theta, x, 0.5) == pytest.approx(0.25)
    assert expected_revenue(uni, theta, x, 0.0) == 0.0
    per = NoiseModel.periodic(0.01)
    # deterministic indicator revenue needs the decision index
    assert expected_revenue(per, theta, x, 0.5, t=157) == pytest.approx(0.5)
    assert expected_revenue(per, theta, x, 1.5, t=157) == 0.0
    with pytest.raises(ValueError):
        expected_revenue(per, theta, x, 0.5)


def test_optimal_price_dominates_grid(gauss_pricing):
    noise = NoiseModel.gaussian()
    for v in (-1.0, 0.0, 2.0):
        star = float(gauss_pricing.optimal_price(v))
        best_rev = expected_revenue_at_value(noise, v, star)
        grid = np.arange(v - 2.0, v + 6.0, 1e-3)
        revs = expected_revenue_at_value(noise, v, grid)
        assert best_rev >= np.max(revs) - 1e-6


def test_pricing_error_paths():
    uni = PricingFunction(NoiseModel.uniform(0, 1))
    with pytest.raises(ZeroDensity):
        uni.virtual_valuation(-0.5)
    with pytest.raises(BracketingFailure):
        uni.inverse_virtual_valuation(5.0)  # range of phi is (-1, 1)
    with pytest.raises(NotADistribution):
        PricingFunction(NoiseModel.periodic(0.01))
    # Cauchy: phi happens to be increasing but its range is (-inf, 0), so a
    # nonnegative target cannot be bracketed; the heavy tail has no finite
    # revenue maximizer there and the failure is reported, not extrapolated.
    heavy = PricingFunction(NoiseModel.cauchy())
    with pytest.raises(BracketingFailure):
        heavy.optimal_price(0.0)
