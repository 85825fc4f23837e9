"""Scenario configuration, synthetic data streams, and replicated runs.

A scenario is one cell of the experiment grid (true noise, budgets,
scaling, horizon).  Within a (scenario, replicate) pair every policy sees
the identical context and noise stream (common random numbers), so regret
and estimation-error comparisons are paired.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .choice import DemandParameter
from .errors import ConfigInvalid
from .noise import GAUSSIAN, LAPLACE, UNIFORM, NoiseModel
from .policies import (OORMLP, ORACLE, POLICY_NAMES, RMLP, OraclePolicy,
                       OORMLPPolicy, PricingPolicy, RMLPPolicy, pricing_for)
from .pricing import expected_revenue_at_value
from .solver import SolverSettings

EXPECTED = "expected"
REALIZED = "realized"

METRIC_NAMES = ("lambda_t", "posted_price", "cum_regret", "est_err_l1",
                "est_err_l2_sq")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full specification of one scenario.

    ``w_budget=None`` resolves to ||theta0||_1 so the constraint always
    admits the true parameter.
    """

    d: int = 10
    s0: int = 3
    theta0: tuple = (1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    w_budget: float | None = None
    horizon: int = 1000
    noise_true: NoiseModel = field(default_factory=NoiseModel.gaussian)
    noise_assumed: NoiseModel = field(default_factory=NoiseModel.gaussian)
    alpha: float = 0.05
    c_lambda: float = 0.01
    replicates: int = 32
    base_seed: int = 20260810
    policies: tuple = (OORMLP, RMLP, ORACLE)
    solver: SolverSettings = field(default_factory=SolverSettings)
    revenue_accounting: str = EXPECTED
    solve_every: int = 1
    scenario_id: str = ""

    def __post_init__(self):
        theta0 = tuple(float(v) for v in self.theta0)
        object.__setattr__(self, "theta0", theta0)
        if len(theta0) != self.d:
            raise ConfigInvalid(f"theta0 has length {len(theta0)}, expected d={self.d}")
        w = self.w_budget
        if w is None:
            w = float(np.sum(np.abs(theta0)))
        object.__setattr__(self, "w_budget", float(w))
        if not DemandParameter(np.array(theta0), self.s0, self.w_budget).in_model_space():
            raise ConfigInvalid("theta0 violates the sparsity/l1 budgets (s0, W)")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigInvalid("alpha must lie in (0, 1)")
        if self.noise_true.family == UNIFORM:
            # Uniform noise has unbounded steepness and no interior revenue
            # maximizer once valuations leave its support; it is admitted
            # for pricing-function evaluation only, never for policy runs.
            raise ConfigInvalid("uniform noise cannot drive a policy run")
        if self.noise_assumed.family not in (GAUSSIAN, LAPLACE):
            # The schedule needs a finite steepness constant and the price
            # map an invertible virtual valuation.
            raise ConfigInvalid("noise_assumed must be gaussian or laplace")
        if self.replicates < 1 or self.horizon < 1:
            raise ConfigInvalid("replicates and horizon must be >= 1")
        if self.c_lambda <= 0:
            raise ConfigInvalid("c_lambda must be positive")
        bad = [p for p in self.policies if p not in POLICY_NAMES]
        if bad:
            raise ConfigInvalid(f"unknown policy name(s) {bad}; "
                                f"choose from {list(POLICY_NAMES)}")
        if self.revenue_accounting not in (EXPECTED, REALIZED):
            raise ConfigInvalid("revenue_accounting must be 'expected' or 'realized'")
        object.__setattr__(self, "policies", tuple(self.policies))
        if not self.scenario_id:
            object.__setattr__(self, "scenario_id", self.default_scenario_id())

    def default_scenario_id(self) -> str:
        return f"{self.noise_true.tag()}_a{self.alpha:g}_c{self.c_lambda:g}"


@dataclass
class TrajectoryMetrics:
    """Per-step series of one (scenario, policy, replicate) trajectory."""

    scenario_id: str
    policy: str
    replicate: int
    lambda_t: np.ndarray
    posted_price: np.ndarray
    cum_regret: np.ndarray
    est_err_l1: np.ndarray
    est_err_l2_sq: np.ndarray
    score_sup_norm: np.ndarray | None = None


def replicate_seed(base_seed: int, scenario_id: str, replicate: int) -> int:
    """Stable per-trajectory seed: the first 8 bytes of
    sha256("{base_seed}|{scenario_id}|{replicate}") as an unsigned int.

    This derivation is part of the output contract; changing it changes
    every trajectory byte-for-byte.
    """
    digest = hashlib.sha256(f"{base_seed}|{scenario_id}|{replicate}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def generate_context(rng: np.random.Generator, d: int) -> np.ndarray:
    """Standard normal entries, rescaled by the sup norm only when it
    exceeds one, so the context always lies in the unit sup-norm ball."""
    x = rng.standard_normal(d)
    m = np.max(np.abs(x))
    return x / m if m > 1.0 else x


def generate_stream(config: ExperimentConfig, seed: int):
    """Context matrix (T, d) and noise vector (T,) for one replicate.

    Contexts are drawn first, then the noise sequence, so the stream is a
    pure function of the seed and is shared by every policy.
    """
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((config.horizon, config.d))
    sup = np.maximum(np.max(np.abs(raw), axis=1), 1.0)
    contexts = raw / sup[:, None]
    eta = config.noise_true.sample(np.arange(1, config.horizon + 1), rng)
    return contexts, np.asarray(eta, dtype=float)


def oracle_pricing(config: ExperimentConfig):
    """Price map used by the oracle benchmark.

    The oracle maximizes the true expected revenue, so it prices with the
    true noise family whenever that family admits an invertible virtual
    valuation (Gaussian, Laplace, uniform).  The periodic process has no
    distribution and the Cauchy map is not invertible; those scenarios fall
    back to the assumed-noise price map, matching how the policies price.
    """
    if config.noise_true.family in (GAUSSIAN, LAPLACE, UNIFORM):
        return pricing_for(config.noise_true)
    return pricing_for(config.noise_assumed)


def make_policy(config: ExperimentConfig, name: str) -> PricingPolicy:
    if name == OORMLP:
        return OORMLPPolicy(config.d, config.w_budget, config.alpha,
                            config.c_lambda, config.noise_assumed,
                            config.solver, config.solve_every,
                            capacity=config.horizon)
    if name == RMLP:
        return RMLPPolicy(config.d, config.w_budget, config.alpha,
                          config.c_lambda, config.noise_assumed,
                          config.solver, capacity=config.horizon)
    if name == ORACLE:
        return OraclePolicy(np.array(config.theta0), oracle_pricing(config))
    raise ConfigInvalid(f"unknown policy {name!r}")


def run_trajectory(config: ExperimentConfig, policy_name: str, replicate: int,
                   collect_score: bool = False) -> TrajectoryMetrics:
    """Execute the query/learn/price/feedback/update loop for T steps."""
    seed = replicate_seed(config.base_seed, config.scenario_id, replicate)
    contexts, eta = generate_stream(config, seed)
    return _run_on_stream(config, policy_name, replicate, contexts, eta,
                          collect_score=collect_score)


def _run_on_stream(config, policy_name, replicate, contexts, eta,
                   collect_score=False) -> TrajectoryMetrics:
    horizon = config.horizon
    theta0 = np.array(config.theta0)
    values = contexts @ theta0
    p_star = np.asarray(oracle_pricing(config).optimal_price(values), dtype=float)

    policy = make_policy(config, policy_name)
    # The oracle's price map over this stream was just evaluated in one
    # vectorized pass; reuse it (elementwise identical to policy.price).
    is_oracle = isinstance(policy, OraclePolicy)
    lam = np.empty(horizon)
    posted = np.empty(horizon)
    err_l1 = np.empty(horizon)
    err_l2 = np.empty(horizon)
    score_acc = np.zeros(config.d) if collect_score else None
    score_sup = np.empty(horizon) if collect_score else None
    assumed = config.noise_assumed

    for i in range(horizon):
        x = contexts[i]
        p = float(p_star[i]) if is_oracle else policy.price(x)
        y = 1 if values[i] + eta[i] >= p else -1
        policy.update(x, p, y)
        posted[i] = p
        lam[i] = policy.current_lambda
        diff = policy.theta_hat - theta0
        err_l1[i] = np.sum(np.abs(diff))
        err_l2[i] = diff @ diff
        if collect_score:
            u = p - values[i]
            w = assumed.hazard(u) if y > 0 else -assumed.reversed_hazard(u)
            score_acc += float(w) * x
            score_sup[i] = np.max(np.abs(score_acc)) / (i + 1)

    steps = np.arange(1, horizon + 1)
    if config.revenue_accounting == EXPECTED:
        r_star = expected_revenue_at_value(config.noise_true, values, p_star, steps)
        r_post = expected_revenue_at_value(config.noise_true, values, posted, steps)
    else:
        willingness = values + eta
        r_star = p_star * (willingness >= p_star)
        r_post = posted * (willingness >= posted)
    cum_regret = np.cumsum(np.asarray(r_star) - np.asarray(r_post))

    return TrajectoryMetrics(
        scenario_id=config.scenario_id, policy=policy_name, replicate=replicate,
        lambda_t=lam, posted_price=posted, cum_regret=cum_regret,
        est_err_l1=err_l1, est_err_l2_sq=err_l2, score_sup_norm=score_sup)


def run_scenario_replicate(config: ExperimentConfig, replicate: int,
                           collect_score: bool = False) -> list[TrajectoryMetrics]:
    """Run every configured policy on the shared stream for one replicate."""
    seed = replicate_seed(config.base_seed, config.scenario_id, replicate)
    contexts, eta = generate_stream(config, seed)
    return [_run_on_stream(config, name, replicate, contexts, eta, collect_score)
            for name in config.policies]


def _grid_task(args):
    config, replicate = args
    return run_scenario_replicate(config, replicate)


@dataclass
class GridResult:
    trajectories: list
    summary: list

    def terminal(self, scenario_id: str, policy: str, metric: str) -> np.ndarray:
        """Terminal metric values across replicates, ordered by replicate."""
        rows = sorted((t for t in self.trajectories
                       if t.scenario_id == scenario_id and t.policy == policy),
                      key=lambda t: t.replicate)
        return np.array([getattr(t, metric)[-1] for t in rows])


def run_grid(configs, threads: int = 1) -> GridResult:
    """Run all replicates of all scenarios and aggregate.

    Replicates are embarrassingly parallel; results are merged in task
    order, so the output is independent of worker scheduling.
    """
    configs = list(configs)
    if not configs:
        raise ConfigInvalid("scenario list is empty")
    ids = [c.scenario_id for c in configs]
    if len(set(ids)) != len(ids):
        raise ConfigInvalid("scenario ids are not unique")
    tasks = [(config, rep) for config in configs for rep in range(config.replicates)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            per_task = list(pool.map(_grid_task, tasks, chunksize=4))
    else:
        per_task = [_grid_task(task) for task in tasks]
    trajectories = [tm for group in per_task for tm in group]
    summary = summarize(configs, trajectories)
    return GridResult(trajectories=trajectories, summary=summary)


def checkpoints(horizon: int) -> np.ndarray:
    """Reporting checkpoints: every T//50 steps, always including T."""
    stride = max(1, horizon // 50)
    ts = list(range(stride, horizon + 1, stride))
    if ts[-1] != horizon:
        ts.append(horizon)
    return np.array(ts, dtype=int)


def summarize(configs, trajectories) -> list[dict]:
    """Across-replicate mean and sample standard deviation at checkpoints."""
    rows = []
    for config in configs:
        cps = checkpoints(config.horizon)
        for policy in config.policies:
            group = sorted((t for t in trajectories
                            if t.scenario_id == config.scenario_id
                            and t.policy == policy),
                           key=lambda t: t.replicate)
            if not group:
                continue
            stacked = {m: np.stack([getattr(t, m) for t in group]) for m in METRIC_NAMES}
            n = len(group)
            for cp in cps:
                row = {"scenario_id": config.scenario_id, "policy": policy,
                       "t_checkpoint": int(cp)}
                for m in METRIC_NAMES:
                    col = stacked[m][:, cp - 1]
                    row[f"mean_{m}"] = float(np.mean(col))
                    row[f"std_{m}"] = float(np.std(col, ddof=1)) if n > 1 else 0.0
                rows.append(row)
    return rows


def with_scenario(config: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Derive a scenario cell; the id is rebuilt unless given explicitly."""
    if "scenario_id" not in overrides:
        overrides["scenario_id"] = ""
    return replace(config, **overrides)
