"""
Report rendering for bound evaluations: JSON, CSV, plain text and Excel.

JSON keys are the BoundReport field names. CSV columns follow REPORT_COLUMNS
in that order, with floats written to 17 significant digits so every value
round-trips.
"""
import json
import logging
from pathlib import Path

import pandas as pd

logger = logging.getLogger(__name__)

REPORT_COLUMNS = [
    "bound_id",
    "status",
    "lhs",
    "rhs",
    "slack",
    "ratio",
    "seminorm",
    "seminorm_argmax",
    "seminorm_provenance",
    "seminorm_right",
    "seminorm_right_argmax",
    "seminorm_right_provenance",
    "x",
    "a",
    "b",
    "warnings",
    "error",
]

FLOAT_FORMAT = "%.17g"


def _flatten(record):
    row = {column: None for column in REPORT_COLUMNS}
    for key in ("bound_id", "status", "lhs", "rhs", "slack", "ratio", "x", "a", "b", "error"):
        row[key] = record.get(key)
    for prefix in ("seminorm", "seminorm_right"):
        estimate = record.get(prefix)
        if estimate:
            row[prefix] = estimate["value"]
            row[f"{prefix}_argmax"] = estimate["argmax"]
            row[f"{prefix}_provenance"] = estimate["provenance"]
    row["warnings"] = "; ".join(record.get("warnings", []))
    return row


def reports_to_frame(records):
    """
    One row per report record (dicts as produced by CaseResult.as_dict).

    Returns a DataFrame with REPORT_COLUMNS.
    """
    return pd.DataFrame([_flatten(record) for record in records], columns=REPORT_COLUMNS)


def render_json(records, config_header, summary=None):
    """
    A single report renders as the report object plus a "config" key; a suite
    renders as {"config", "summary", "reports"}.
    """
    if summary is None and len(records) == 1:
        document = dict(records[0])
        document["config"] = config_header
    else:
        document = {"config": config_header, "summary": summary, "reports": list(records)}
    return json.dumps(document, indent=2, sort_keys=False)


def render_csv(records, config_header):
    """CSV with the config echoed as leading '#' comment lines."""
    header = "".join(f"# {key}={value}\n" for key, value in config_header.items())
    return header + reports_to_frame(records).to_csv(index=False, float_format=FLOAT_FORMAT)


def render_text(records, summary=None):
    frame = reports_to_frame(records)
    columns = ["bound_id", "status", "lhs", "rhs", "ratio", "seminorm", "seminorm_provenance", "x"]
    lines = [frame[columns].to_string(index=False, float_format=lambda value: f"{value:.10g}")]
    if summary is not None:
        lines.append("")
        lines.append(
            f"total {summary['total']}  passed {summary['passed']}  failed {summary['failed']}  "
            f"errored {summary['errored']}  worst ratio {summary['worst_ratio']:.10g}  "
            f"max violation {summary['max_violation']:.3g}"
        )
    return "\n".join(lines)


def render(records, config_header, output_format, summary=None):
    if output_format == "json":
        return render_json(records, config_header, summary)
    if output_format == "csv":
        return render_csv(records, config_header)
    return render_text(records, summary)


def generate_excel_report(records, config_header, path, summary=None):
    """
    Write an Excel workbook with Summary, Reports and Config sheets.

    Parameters:
    - records: Report dicts
    - config_header: RunConfig.as_header()
    - path: Destination .xlsx file
    - summary: Optional SuiteSummary dict
    """
    with pd.ExcelWriter(path, engine="xlsxwriter") as writer:
        # Summary sheet
        if summary is not None:
            summary_df = pd.DataFrame({
                "Metric": ["Total", "Passed", "Failed", "Errored", "Worst Ratio", "Max Violation"],
                "Value": [summary["total"], summary["passed"], summary["failed"], summary["errored"],
                          summary["worst_ratio"], summary["max_violation"]],
            })
            summary_df.to_excel(writer, sheet_name="Summary", index=False)
            summary_sheet = writer.sheets["Summary"]
            summary_sheet.set_column("A:A", 20)
            summary_sheet.set_column("B:B", 25)

        # Reports sheet
        reports_df = reports_to_frame(records)
        reports_df.to_excel(writer, sheet_name="Reports", index=False)
        reports_sheet = writer.sheets["Reports"]
        reports_sheet.set_column("A:B", 10)
        reports_sheet.set_column("C:P", 24)
        reports_sheet.set_column("Q:Q", 60)

        # Config sheet
        config_df = pd.DataFrame({"Setting": list(config_header), "Value": [str(v) for v in config_header.values()]})
        config_df.to_excel(writer, sheet_name="Config", index=False)
        writer.sheets["Config"].set_column("A:B", 20)
    logger.info("wrote %d reports to %s", len(records), path)


def write_report(records, config_header, path, summary=None):
    """Write records to path; the suffix (.json, .csv, .xlsx) picks the format."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".xlsx":
        generate_excel_report(records, config_header, path, summary)
        return
    if suffix == ".json":
        text = render_json(records, config_header, summary if summary is not None else {})
    elif suffix == ".csv":
        text = render_csv(records, config_header)
    else:
        raise ValueError(f"report files must end in .json, .csv or .xlsx, got {path.name!r}")
    path.write_text(text + ("" if text.endswith("\n") else "\n"), encoding="utf-8")
    logger.info("wrote %d reports to %s", len(records), path)
