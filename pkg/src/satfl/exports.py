"""CSV and summary-text writers for simulation artifacts.

All numeric formatting is fixed so that repeated runs of the same scenario
produce byte-identical files.
"""

from __future__ import annotations

import csv

from .engine import SimResult
from .orbital import ContactPlan
from .scheduler import TransmissionSchedule


def _f(x, digits=6):
    return "" if x is None else f"{x:.{digits}f}"


def write_contact_plan_csv(
    plan: ContactPlan, max_distances_m: list[list[float]], path
) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["satellite_id", "pass_index", "rise_s", "set_s", "duration_s",
             "max_distance_m"]
        )
        for k, passes in enumerate(plan.passes):
            for n, p in enumerate(passes):
                w.writerow([
                    k, n, _f(p.rise_s), _f(p.set_s), _f(p.duration_s),
                    _f(max_distances_m[k][n], 3),
                ])


def write_schedule_csv(schedule: TransmissionSchedule, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["satellite_id", "pass_index", "decision", "dl_time_s", "ul_time_s"])
        for cycles in schedule.cycles:
            for c in cycles:
                w.writerow([
                    c.satellite_id, c.dl_pass, c.mode.value,
                    _f(c.dl_start_s), _f(c.ul_start_s),
                ])


def write_metrics_csv(result: SimResult, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([
            "sim_time_s", "global_epoch", "satellite_id", "epoch_staleness",
            "time_staleness_s", "test_accuracy",
        ])
        for r in result.rows:
            w.writerow([
                _f(r.sim_time_s),
                r.global_epoch,
                "" if r.satellite_id is None else r.satellite_id,
                "" if r.epoch_staleness is None else r.epoch_staleness,
                _f(r.time_staleness_s),
                _f(r.test_accuracy),
            ])


def run_summary_lines(result: SimResult) -> list[str]:
    s = result.scenario
    midpoint = 0.5 * (result.initial_accuracy + result.final_accuracy)
    t_mid = result.time_to_accuracy(midpoint)
    lines = [
        f"policy = {s.policy}",
        f"seed = {s.seed}",
        f"horizon_s = {_f(s.horizon_s)}",
        f"eval_period_s = {_f(s.eval_period_s)}",
        f"satellites = {s.satellite_count}",
        f"global_epochs = {result.global_epoch}",
        f"initial_accuracy = {_f(result.initial_accuracy)}",
        f"final_accuracy = {_f(result.final_accuracy)}",
        f"midpoint_threshold = {_f(midpoint)}",
        f"time_to_midpoint_s = {_f(t_mid)}",
        f"mean_time_staleness_s = {_f(result.mean_time_staleness_s())}",
        f"mean_epoch_staleness = {_f(result.mean_epoch_staleness())}",
    ]
    return lines


def write_run_summary(result: SimResult, path) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(run_summary_lines(result)) + "\n")


def write_comparison_csv(table: list[dict], path) -> None:
    cols = [
        "policy", "threshold_accuracy", "time_to_threshold_s", "final_accuracy",
        "mean_time_staleness_s", "mean_epoch_staleness", "global_epochs",
    ]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in table:
            w.writerow([
                row["policy"],
                _f(row["threshold_accuracy"]),
                _f(row["time_to_threshold_s"]),
                _f(row["final_accuracy"]),
                _f(row["mean_time_staleness_s"]),
                _f(row["mean_epoch_staleness"]),
                row["global_epochs"],
            ])
