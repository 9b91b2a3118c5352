"""
Module for displaying stored verification runs
"""
import pandas as pd

from database import get_all_runs, get_run_by_id

RUN_COLUMNS = {
    "id": "ID",
    "command": "Command",
    "suite_path": "Suite",
    "seed": "Seed",
    "created_at": "Created At",
    "total": "Total",
    "passed": "Passed",
    "failed": "Failed",
    "errored": "Errored",
    "worst_ratio": "Worst Ratio",
    "max_violation": "Max Violation",
}


def format_runs(runs_df):
    """
    Render the run table as text

    Parameters:
    - runs_df: DataFrame from get_all_runs
    """
    if runs_df.empty:
        return "No verification runs have been stored yet."
    table = runs_df[list(RUN_COLUMNS)].rename(columns=RUN_COLUMNS)
    return table.to_string(index=False, float_format=lambda value: f"{value:.6g}")


def format_run_detail(run):
    """
    Render one stored run: its summary, config and the failing reports
    """
    lines = [
        f"Run {run['id']} ({run['command']}) at {run['created_at']}",
        f"  suite: {run['suite_path'] or '-'}",
        f"  seed: {run['seed']}",
        f"  total {run['total']}, passed {run['passed']}, failed {run['failed']}, errored {run['errored']}",
        f"  worst ratio {run['worst_ratio']:.17g}, max violation {run['max_violation']:.3g}",
        "  config:",
    ]
    lines += [f"    {key} = {value}" for key, value in (run["config"] or {}).items()]

    # Only the cases that did not pass
    reports = [r for r in (run["reports"] or []) if r.get("status") != "pass"]
    if reports:
        frame = pd.DataFrame([{
            "bound_id": r.get("bound_id"),
            "status": r.get("status"),
            "lhs": r.get("lhs"),
            "rhs": r.get("rhs"),
            "error": r.get("error", ""),
        } for r in reports])
        lines.append("  not passing:")
        lines.append(frame.to_string(index=False))
    return "\n".join(lines)


def display_history(record_id=None):
    """
    Text for the history subcommand: the run table, or one run in detail

    Returns None when record_id does not exist.
    """
    if record_id is None:
        return format_runs(get_all_runs())
    run = get_run_by_id(record_id)
    if run is None:
        return None
    return format_run_detail(run)
