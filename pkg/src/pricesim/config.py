"""Experiment configuration files: schema, scenario expansion, digests.

A config file is YAML with a flat top level.  The scenario grid is the
cartesian product of the list-valued axes (noise_true x alpha x c_lambda);
scalar values denote a single-point axis.  All other fields are shared by
every cell.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import yaml

from .errors import ConfigInvalid
from .noise import NoiseModel
from .policies import POLICY_NAMES
from .simulator import EXPECTED, REALIZED, ExperimentConfig
from .solver import SolverSettings

_TOP_LEVEL_KEYS = {
    "d", "s0", "theta0", "w_budget", "horizon", "alpha", "c_lambda",
    "noise_true", "noise_assumed", "replicates", "base_seed", "policies",
    "solver", "revenue_accounting", "solve_every",
}
_SOLVER_KEYS = {"max_iterations", "kkt_tolerance", "step_shrink",
                "initial_step", "warm_start"}

REFERENCE_CONFIG = """\
# Reference experiment configuration; every field is shown with its default
# except the grid axes, which reproduce the 12-scenario comparison grid.
# The scenario grid is the cartesian product of the list-valued axes:
# noise_true x alpha x c_lambda.  Scalars denote single-point axes.
theta0: [1, 1, 1, 0, 0, 0, 0, 0, 0, 0]
s0: 3
# w_budget: 3.0          # defaults to ||theta0||_1
horizon: 1000
replicates: 32
base_seed: 20260810
alpha: [0.05, 0.1, 0.2]
c_lambda: 0.01
noise_true:
  - {family: gaussian, mu: 0.0, sigma: 1.0}
  - {family: laplace, mu: 0.0, b: 1.0}
  - {family: periodic, omega: 0.01}
  - {family: cauchy, x0: 0.0, gamma: 1.0}
noise_assumed: {family: gaussian, mu: 0.0, sigma: 1.0}
policies: [oormlp, rmlp, oracle]
revenue_accounting: expected    # or: realized (indicator revenue)
solve_every: 1                  # re-solve cadence; 1 = every decision point
solver:
  max_iterations: 500
  kkt_tolerance: 1.0e-7
  step_shrink: 0.5
  initial_step: 1.0
  warm_start: true
"""


def _as_list(value):
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _require_number(raw, key):
    if not isinstance(raw, (int, float)) or isinstance(raw, bool):
        raise ConfigInvalid(f"{key}: expected a number, got {raw!r}")
    return raw


def load_raw_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigInvalid(f"config file is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigInvalid("config file must contain a mapping at the top level")
    return raw


def resolve_config(raw: dict, seed_override: int | None = None) -> dict:
    """Validate a raw mapping and fill defaults; returns the canonical form.

    The canonical form has every axis as a list and every default made
    explicit, so its JSON serialization is the digest input.
    """
    unknown = set(raw) - _TOP_LEVEL_KEYS
    if unknown:
        raise ConfigInvalid(f"unknown config key(s): {sorted(unknown)}")
    if "theta0" not in raw:
        raise ConfigInvalid("theta0: required field is missing")
    theta0 = raw["theta0"]
    if not isinstance(theta0, list) or not theta0:
        raise ConfigInvalid("theta0: expected a nonempty list of numbers")
    theta0 = [float(_require_number(v, "theta0")) for v in theta0]

    d = raw.get("d", len(theta0))
    if d != len(theta0):
        raise ConfigInvalid(f"d: value {d} does not match len(theta0)={len(theta0)}")

    noises = _as_list(raw.get("noise_true", {"family": "gaussian"}))
    noise_axis = []
    for spec in noises:
        noise_axis.append(NoiseModel.from_config(spec).as_config())
    assumed = NoiseModel.from_config(
        raw.get("noise_assumed", {"family": "gaussian"})).as_config()

    alphas = [float(_require_number(a, "alpha")) for a in _as_list(raw.get("alpha", 0.05))]
    c_lambdas = [float(_require_number(c, "c_lambda"))
                 for c in _as_list(raw.get("c_lambda", 0.01))]

    policies = raw.get("policies", list(POLICY_NAMES))
    if not isinstance(policies, list) or not policies:
        raise ConfigInvalid("policies: expected a nonempty list")
    for p in policies:
        if p not in POLICY_NAMES:
            raise ConfigInvalid(f"policies: unknown policy {p!r}")

    solver_raw = raw.get("solver", {})
    if not isinstance(solver_raw, dict):
        raise ConfigInvalid("solver: expected a mapping")
    unknown = set(solver_raw) - _SOLVER_KEYS
    if unknown:
        raise ConfigInvalid(f"solver: unknown key(s) {sorted(unknown)}")
    try:
        solver = SolverSettings(**solver_raw)
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"solver: {exc}") from exc

    accounting = raw.get("revenue_accounting", EXPECTED)
    if accounting not in (EXPECTED, REALIZED):
        raise ConfigInvalid("revenue_accounting: must be 'expected' or 'realized'")

    w_budget = raw.get("w_budget")
    if w_budget is not None:
        w_budget = float(_require_number(w_budget, "w_budget"))
    solve_every = raw.get("solve_every", 1)
    if not isinstance(solve_every, int) or solve_every < 1:
        raise ConfigInvalid("solve_every: expected a positive integer")

    base_seed = int(raw.get("base_seed", 20260810))
    if seed_override is not None:
        base_seed = int(seed_override)

    resolved = {
        "d": int(d),
        "s0": int(raw.get("s0", 3)),
        "theta0": theta0,
        "w_budget": w_budget,
        "horizon": int(raw.get("horizon", 1000)),
        "alpha": alphas,
        "c_lambda": c_lambdas,
        "noise_true": noise_axis,
        "noise_assumed": assumed,
        "replicates": int(raw.get("replicates", 32)),
        "base_seed": base_seed,
        "policies": list(policies),
        "solver": {
            "max_iterations": solver.max_iterations,
            "kkt_tolerance": solver.kkt_tolerance,
            "step_shrink": solver.step_shrink,
            "initial_step": solver.initial_step,
            "warm_start": solver.warm_start,
        },
        "revenue_accounting": accounting,
        "solve_every": solve_every,
    }
    return resolved


def expand_scenarios(resolved: dict) -> list[ExperimentConfig]:
    """Cartesian expansion of the grid axes into scenario cells."""
    solver = SolverSettings(**resolved["solver"])
    cells = []
    for noise_spec in resolved["noise_true"]:
        for alpha in resolved["alpha"]:
            for c_lambda in resolved["c_lambda"]:
                cells.append(ExperimentConfig(
                    d=resolved["d"], s0=resolved["s0"],
                    theta0=tuple(resolved["theta0"]),
                    w_budget=resolved["w_budget"],
                    horizon=resolved["horizon"],
                    noise_true=NoiseModel.from_config(noise_spec),
                    noise_assumed=NoiseModel.from_config(resolved["noise_assumed"]),
                    alpha=alpha, c_lambda=c_lambda,
                    replicates=resolved["replicates"],
                    base_seed=resolved["base_seed"],
                    policies=tuple(resolved["policies"]),
                    solver=solver,
                    revenue_accounting=resolved["revenue_accounting"],
                    solve_every=resolved["solve_every"],
                ))
    return cells


def config_digest(resolved: dict) -> str:
    """Stable content hash: changes iff a semantic field changes."""
    canon = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


_SWEEP_KEYS = ("alpha", "c_lambda", "omega")


def apply_sweep(resolved: dict, sweep_specs) -> tuple[dict, dict]:
    """Apply ``key=v1,v2`` sweep specs to a resolved config.

    ``alpha`` and ``c_lambda`` replace the corresponding axis; ``omega``
    replaces the noise axis with periodic processes at the given
    frequencies.  Returns (new resolved config, {key: values}).
    """
    swept = {}
    resolved = dict(resolved)
    for spec in sweep_specs or []:
        if "=" not in spec:
            raise ConfigInvalid(f"sweep spec {spec!r} is not of the form key=v1,v2")
        key, _, rest = spec.partition("=")
        key = key.strip()
        if key not in _SWEEP_KEYS:
            raise ConfigInvalid(f"sweep key {key!r} not supported; "
                                f"choose from {list(_SWEEP_KEYS)}")
        try:
            values = [float(v) for v in rest.split(",") if v.strip() != ""]
        except ValueError as exc:
            raise ConfigInvalid(f"sweep {key}: values must be numbers") from exc
        if not values:
            raise ConfigInvalid(f"sweep {key}: no values given")
        if key == "omega":
            resolved["noise_true"] = [
                NoiseModel.periodic(w).as_config() for w in values]
        else:
            resolved[key] = values
        swept[key] = values
    return resolved, swept
