"""File emission for simulation runs.

Per run: summary.json (totals + config echo), timeseries.csv (one row per
step), devices.csv (per-device per-step window usage, busy slots, and
utilization). Column orders are fixed and documented in the README.

Writers accept the serialized report dict so they work equally for local
RunReport objects and for reports fetched from the HTTP service.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

from .engine import RunReport

TIMESERIES_COLUMNS = (
    "step", "arrivals", "edge_accepted", "edge_rejected", "cloud_redirected",
    "dropped", "tokens_to_cloud", "cloud_tokens_in_out", "cloud_cost_cents",
)
DEVICES_COLUMNS = ("step", "device_id", "window_used", "busy_slots", "utilization")


class IoError(OSError):
    pass


def emit_summary(report: RunReport | dict, out_dir: str | Path) -> list[Path]:
    """Write summary.json, timeseries.csv, and devices.csv into out_dir."""
    data = report.to_dict() if isinstance(report, RunReport) else report
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        summary = out_dir / "summary.json"
        with summary.open("w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")

        timeseries = out_dir / "timeseries.csv"
        with timeseries.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TIMESERIES_COLUMNS)
            for s in data["steps"]:
                writer.writerow([s[c] for c in TIMESERIES_COLUMNS])

        devices = out_dir / "devices.csv"
        with devices.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(DEVICES_COLUMNS)
            for s in data["steps"]:
                for did in data["device_ids"]:
                    writer.writerow([
                        s["step"], did, s["window_used"][did],
                        s["busy_slots"][did], s["utilization"][did],
                    ])
    except OSError as exc:
        raise IoError(f"cannot write run outputs to {out_dir}: {exc}") from exc
    return [summary, timeseries, devices]


def compare_header() -> list[str]:
    from .runner import COMPARE_METRICS
    header = ["strategy", "pattern", "seeds"]
    for m in COMPARE_METRICS:
        header += [f"{m}_mean", f"{m}_std"]
    return header


def write_compare_csv(cells: list[dict], path: str | Path) -> Path:
    """cells: serialized CellStats dicts (strategy/pattern/seeds/means/stds)."""
    from .runner import COMPARE_METRICS
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(compare_header())
            for cell in cells:
                row = [cell["strategy"], cell["pattern"], cell["seeds"]]
                for m in COMPARE_METRICS:
                    row += [cell["means"][m], cell["stds"][m]]
                writer.writerow(row)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def write_sweep_csv(rows: list[dict], path: str | Path) -> Path:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            if not rows:
                fh.write("window_len_steps,seeds\n")
                return path
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path
