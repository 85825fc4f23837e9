"""CSV and JSON emitters for experiment and verification runs.

Floats are written with 17 significant digits ('.' decimal point, no
thousands separators) so that re-parsing round-trips exactly and identical
runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .simulator import METRIC_NAMES

TRAJECTORY_COLUMNS = ("scenario_id", "replicate", "t", "policy", "lambda_t",
                      "posted_price", "cum_regret", "est_err_l1", "est_err_l2_sq")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_trajectories_csv(path, trajectories) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(",".join(TRAJECTORY_COLUMNS) + "\n")
        for tm in trajectories:
            prefix = f"{tm.scenario_id},{tm.replicate},"
            suffix = f",{tm.policy},"
            lam, price = tm.lambda_t, tm.posted_price
            regret, e1, e2 = tm.cum_regret, tm.est_err_l1, tm.est_err_l2_sq
            rows = (
                prefix + str(t + 1) + suffix
                + _fmt(lam[t]) + "," + _fmt(price[t]) + "," + _fmt(regret[t])
                + "," + _fmt(e1[t]) + "," + _fmt(e2[t])
                for t in range(len(price)))
            fh.write("\n".join(rows) + "\n")


def summary_columns() -> list[str]:
    cols = ["scenario_id", "policy", "t_checkpoint"]
    for metric in METRIC_NAMES:
        cols.append(f"mean_{metric}")
        cols.append(f"std_{metric}")
    return cols


def write_summary_csv(path, summary_rows) -> None:
    cols = summary_columns()
    with Path(path).open("w", newline="") as fh:
        fh.write(",".join(cols) + "\n")
        for row in summary_rows:
            parts = [str(row["scenario_id"]), str(row["policy"]),
                     str(row["t_checkpoint"])]
            parts += [_fmt(row[c]) for c in cols[3:]]
            fh.write(",".join(parts) + "\n")


def write_manifest(path, manifest: dict) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def write_verify_report(path, records) -> None:
    Path(path).write_text(json.dumps({"checks": records}, indent=2) + "\n")


def write_sweep_index(path, cells) -> None:
    Path(path).write_text(json.dumps({"cells": cells}, indent=2) + "\n")
