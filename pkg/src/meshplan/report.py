"""Report emission: metric rows as CSV, full bundles as JSON.

Field order is pinned so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path as FsPath

from .pipeline import PipelineResult, SweepRow

CSV_COLUMNS = ("scenario", "protocol", "channels", "horizon_s", "seed",
               "generated", "delivered", "dropped", "avg_delay_s", "pdr",
               "throughput_pkts")

ASSIGNMENT_COLUMNS = ("link", "channel", "frame")


def result_row(result: PipelineResult) -> SweepRow:
    m = result.metrics
    return SweepRow(result.scenario_name, result.protocol, result.n_channels,
                    result.config.horizon_s, result.config.seed, m.generated,
                    m.delivered, m.dropped, m.avg_delay_s, m.pdr, m.throughput_pkts)


def rows_to_csv(rows: list[SweepRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        d = r.to_dict()
        writer.writerow([d[c] for c in CSV_COLUMNS])
    return out.getvalue()


def assignment_table(result: PipelineResult) -> list[dict]:
    asg = result.assignment
    return [{"link": l, "channel": asg.channel_of[l], "frame": asg.frame_of[l]}
            for l in range(asg.n_links)]


def assignment_to_csv(result: PipelineResult) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(ASSIGNMENT_COLUMNS)
    for row in assignment_table(result):
        writer.writerow([row[c] for c in ASSIGNMENT_COLUMNS])
    return out.getvalue()


def render_report(obj: PipelineResult | list[SweepRow], fmt: str) -> str:
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown report format {fmt!r}")
    if isinstance(obj, PipelineResult):
        if fmt == "csv":
            return rows_to_csv([result_row(obj)])
        return json.dumps(obj.to_dict(), indent=2, sort_keys=False) + "\n"
    if fmt == "csv":
        return rows_to_csv(obj)
    return json.dumps([r.to_dict() for r in obj], indent=2) + "\n"


def emit_report(obj: PipelineResult | list[SweepRow], fmt: str,
                path: str | FsPath) -> str:
    """Render and write a report; returns the written text."""
    text = render_report(obj, fmt)
    p = FsPath(path)
    try:
        p.write_text(text)
    except OSError as e:
        raise OSError(f"cannot write report to {p}: {e}") from e
    return text
