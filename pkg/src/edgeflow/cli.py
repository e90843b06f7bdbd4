"""Command-line client for the edgeflow service.

The CLI is a thin HTTP client: it reads config and profile files, posts
them to the service, and writes the returned reports to disk. Without
--server it talks to an in-process instance of the app, so no daemon is
needed for local runs. Diagnostics go to stderr; data goes to files or
stdout.
"""
from __future__ import annotations

import json
import math
import sys
import warnings
from pathlib import Path

import click
import httpx

from .config import default_seed, load_run_config
from .engine import config_echo
from .profiles import load_profiles
from .reports import emit_summary, write_compare_csv, write_sweep_csv


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=300.0)
    with warnings.catch_warnings():
        # starlette warns about its httpx-based TestClient on import; the
        # in-process client is an implementation detail, keep stderr clean.
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .api import app
    return TestClient(app)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    try:
        resp = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        raise click.ClickException(f"request to {path} failed: {exc}") from exc
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise click.ClickException(f"{path} returned {resp.status_code}: {detail}")
    return resp.json()


def _load_sim_payload(config: str, strategy: str | None, seed: int | None) -> dict:
    try:
        cfg = load_run_config(config, strategy=strategy, seed=seed)
    except Exception as exc:
        raise click.ClickException(str(exc)) from exc
    payload = config_echo(cfg)
    payload["workload"] = dict(payload["workload"])
    return payload


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Base URL of a running edgeflow service; default is in-process.")
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Edge-first inference simulator and platform metrics."""
    ctx.obj = server


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--strategy", default=None,
              type=click.Choice(["random", "weighted", "load_aware"]))
@click.option("--seed", default=None, type=int)
@click.option("--out", "out_dir", default="out", type=click.Path())
@click.pass_obj
def simulate(server: str | None, config_path: str, strategy: str | None,
             seed: int | None, out_dir: str) -> None:
    """Run one simulation and write summary.json/timeseries.csv/devices.csv."""
    payload = _load_sim_payload(config_path, strategy, seed)
    with _client(server) as client:
        report = _post(client, "/simulate", {"config": payload})
    try:
        paths = emit_summary(report, out_dir)
    except OSError as exc:
        raise click.ClickException(str(exc)) from exc
    totals = report["totals"]
    click.echo(f"wrote {', '.join(str(p) for p in paths)}", err=True)
    click.echo(json.dumps(totals, indent=2, sort_keys=True))


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--seeds", default=30, type=int, show_default=True)
@click.option("--base-seed", default=None, type=int)
@click.option("--out", "out_dir", default=None, type=click.Path())
@click.pass_obj
def compare(server: str | None, config_path: str, seeds: int,
            base_seed: int | None, out_dir: str | None) -> None:
    """Compare all strategies under steady and bursty workloads."""
    if seeds < 1:
        raise click.ClickException("--seeds must be >= 1")
    payload = _load_sim_payload(config_path, None, None)
    body = {"config": payload, "seeds": seeds,
            "base_seed": default_seed() if base_seed is None else base_seed}
    with _client(server) as client:
        cells = _post(client, "/compare", body)["cells"]
    _print_compare_table(cells)
    if out_dir:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        path = write_compare_csv(cells, Path(out_dir) / "compare.csv")
        click.echo(f"wrote {path}", err=True)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--windows", default="1,2,5,10", show_default=True,
              help="Comma-separated window lengths to sweep.")
@click.option("--seeds", default=10, type=int, show_default=True)
@click.option("--base-seed", default=None, type=int)
@click.option("--out", "out_dir", default=None, type=click.Path())
@click.pass_obj
def sweep(server: str | None, config_path: str, windows: str, seeds: int,
          base_seed: int | None, out_dir: str | None) -> None:
    """Sweep sliding-window length and report seed-mean counters per window."""
    try:
        window_list = [int(w) for w in windows.split(",") if w.strip()]
    except ValueError:
        raise click.ClickException(f"bad --windows list: {windows!r}") from None
    if not window_list or any(w < 1 for w in window_list):
        raise click.ClickException("--windows must be positive integers")
    payload = _load_sim_payload(config_path, None, None)
    body = {"config": payload, "windows": window_list, "seeds": seeds,
            "base_seed": default_seed() if base_seed is None else base_seed}
    with _client(server) as client:
        rows = _post(client, "/sweep", body)["rows"]
    for row in rows:
        click.echo(json.dumps(row, sort_keys=True))
    if out_dir:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        path = write_sweep_csv(rows, Path(out_dir) / "sweep.csv")
        click.echo(f"wrote {path}", err=True)


@main.command()
@click.option("--profiles", "profiles_path", required=True,
              type=click.Path(exists=True))
@click.option("--alpha", default=0.5, show_default=True, type=float)
@click.option("--avg-in", default=48, show_default=True, type=int)
@click.option("--avg-out", default=249, show_default=True, type=int)
@click.option("--r-mode", default="raw", show_default=True,
              type=click.Choice(["raw", "inverse_ttft"]))
@click.option("--rate", "electricity_rate", default=25.0, show_default=True,
              type=float, help="Electricity rate in cents/kWh.")
@click.option("--out", "out_path", default="platform_report.json",
              show_default=True, type=click.Path())
@click.pass_obj
def metrics(server: str | None, profiles_path: str, alpha: float, avg_in: int,
            avg_out: int, r_mode: str, electricity_rate: float,
            out_path: str) -> None:
    """Print the platform comparison table and write platform_report.json."""
    try:
        devices, cloud, _ = load_profiles(profiles_path, electricity_rate)
    except Exception as exc:
        raise click.ClickException(str(exc)) from exc
    body = {
        "devices": [
            {
                "id": d.id, "tgs": d.tgs, "ttft_s": d.ttft_s,
                "power_w": d.power_w,
                "energy_per_query_wh": d.energy_per_query_wh,
                "quality": d.quality,
                "window_token_capacity": d.window_token_capacity,
                "max_parallel": d.max_parallel,
            }
            for d in devices
        ],
        "cloud": {
            "price_in_cents_per_token": cloud.price_in_cents_per_token,
            "price_out_cents_per_token": cloud.price_out_cents_per_token,
            "quality": cloud.quality,
            "ttft_s": cloud.ttft_s,
            "window_token_capacity": (
                "unlimited" if math.isinf(cloud.window_token_capacity)
                else cloud.window_token_capacity),
        },
        "electricity_rate_cents_per_kwh": electricity_rate,
        "alpha": alpha, "avg_in": avg_in, "avg_out": avg_out, "r_mode": r_mode,
    }
    with _client(server) as client:
        rows = _post(client, "/metrics", body)["rows"]
    header = f"{'platform':<24}{'CPR (c)':>10}{'Q':>7}{'R':>7}{'U':>8}{'PCR':>10}"
    click.echo(header)
    for r in rows:
        click.echo(f"{r['platform']:<24}{r['cpr_cents']:>10.4f}{r['q']:>7.2f}"
                   f"{r['r']:>7.2f}{r['utility']:>8.3f}{r['pcr']:>10.2f}")
    try:
        with open(out_path, "w") as fh:
            json.dump({"rows": rows}, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"wrote {out_path}", err=True)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host: str, port: int) -> None:
    """Run the edgeflow HTTP service."""
    import uvicorn
    uvicorn.run("edgeflow.api:app", host=host, port=port)


def _print_compare_table(cells: list[dict]) -> None:
    from .runner import COMPARE_METRICS
    header = f"{'strategy':<12}{'pattern':<9}"
    for m in COMPARE_METRICS:
        header += f"{m:>24}"
    click.echo(header)
    for c in cells:
        line = f"{c['strategy']:<12}{c['pattern']:<9}"
        for m in COMPARE_METRICS:
            line += f"{c['means'][m]:>15.2f} ±{c['stds'][m]:>6.2f} "
        click.echo(line)


if __name__ == "__main__":
    main()
