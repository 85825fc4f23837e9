"""Contextual dynamic pricing simulation library.

Core pieces: noise families with log-concavity constants, the binary sale
choice model and its penalized likelihood solver, the online regularization
schedule, virtual-valuation pricing, three pricing policies, a replicated
scenario simulator, and Monte Carlo checks of the time-uniform
concentration guarantees.
"""

__version__ = "0.1.0"

from .choice import (DemandParameter, TransactionRecord, neg_log_likelihood,
                     sale_status, score, stack_records, willingness_to_pay)
from .noise import (LogConcavityConstants, NoiseModel, flatness,
                    log_concavity_constants, steepness)
from .policies import (OORMLP, ORACLE, RMLP, OraclePolicy, OORMLPPolicy,
                       PricingPolicy, RMLPPolicy)
from .pricing import PricingFunction, expected_revenue, expected_revenue_at_value
from .regularization import (OnlineRegularization, lambda_closed_form,
                             lambda_incremental, update_covariance)
from .simulator import (ExperimentConfig, GridResult, TrajectoryMetrics,
                        generate_context, generate_stream, replicate_seed,
                        run_grid, run_trajectory, with_scenario)
from .solver import (SolverResult, SolverSettings, kkt_residual,
                     project_l1_ball, soft_threshold, solve)
from .verification import (CrossingReport, EnvelopeReport, LogRegretFit,
                           check_event_g, check_score_envelope, log_regret_fit,
                           phi_lower_bound, restricted_eigenvalue,
                           time_uniform_subgaussian_check, ville_check)

__all__ = [
    "DemandParameter", "TransactionRecord", "neg_log_likelihood",
    "sale_status", "score", "stack_records", "willingness_to_pay",
    "LogConcavityConstants", "NoiseModel", "flatness",
    "log_concavity_constants", "steepness",
    "OORMLP", "ORACLE", "RMLP", "OraclePolicy", "OORMLPPolicy",
    "PricingPolicy", "RMLPPolicy",
    "PricingFunction", "expected_revenue", "expected_revenue_at_value",
    "OnlineRegularization", "lambda_closed_form", "lambda_incremental",
    "update_covariance",
    "ExperimentConfig", "GridResult", "TrajectoryMetrics", "generate_context",
    "generate_stream", "replicate_seed", "run_grid", "run_trajectory",
    "with_scenario",
    "SolverResult", "SolverSettings", "kkt_residual", "project_l1_ball",
    "soft_threshold", "solve",
    "CrossingReport", "EnvelopeReport", "LogRegretFit", "check_event_g",
    "check_score_envelope", "log_regret_fit", "phi_lower_bound",
    "restricted_eigenvalue", "time_uniform_subgaussian_check", "ville_check",
]
