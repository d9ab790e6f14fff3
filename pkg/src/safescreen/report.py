"""Run records (JSON) and benchmark comparison tables (CSV)."""

import csv
import json
import math

from .path import PathReport

RECORD_VERSION = 1


def run_record(command, config, dataset, result):
    return {
        "version": RECORD_VERSION,
        "command": list(command),
        "config": config,
        "dataset": dataset.digest(),
        "result": result,
    }


def dump_record(record):
    """Serialize deterministically; floats use shortest round-trip repr."""
    return json.dumps(record, indent=2, sort_keys=True) + "\n"


def load_record(text):
    return json.loads(text)


def _work(report):
    if isinstance(report, PathReport):
        return report.total_epochs, report.total_updates, report.wall_time
    return report.epochs_used, report.coordinate_updates, report.wall_time


def bench_table(reports, baseline="none"):
    """One row per rule: wall time, epochs, coordinate updates and log10 ratios to ``baseline``."""
    base = reports.get(baseline)
    base_epochs, base_updates, base_time = _work(base) if base is not None else (None, None, None)
    rows = []
    for rule, rep in reports.items():
        epochs, updates, wall = _work(rep)
        rows.append({
            "rule": rule,
            "wall_time": wall,
            "total_epochs": epochs,
            "coordinate_updates": updates,
            "log10_time_ratio": _log_ratio(wall, base_time),
            "log10_update_ratio": _log_ratio(updates, base_updates),
        })
    return rows


def _log_ratio(value, base):
    if base is None or base <= 0 or value <= 0:
        return None
    return math.log10(value / base)


def event_rows(reports):
    """Long-format per-event active counts (solve reports) or per-lambda curves (paths)."""
    rows = []
    for rule, rep in reports.items():
        if isinstance(rep, PathReport):
            for i, (lam, active) in enumerate(zip(rep.lambdas, rep.active_curve)):
                rows.append({"rule": rule, "index": i, "epoch": "", "lambda": float(lam), "active": active})
        else:
            for i, ev in enumerate(rep.events):
                rows.append({"rule": rule, "index": i, "epoch": ev.epoch, "lambda": rep.lam, "active": ev.active_after})
    return rows


def write_csv(path, rows):
    if not rows:
        open(path, "w").close()
        return
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
