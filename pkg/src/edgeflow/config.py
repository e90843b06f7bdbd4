"""Run configuration: a single TOML file plus override precedence.

Top-level keys: profiles (CSV path, relative to the config file), strategy,
window_len_steps, seed, electricity_rate_cents_per_kwh,
cloud_window_token_capacity (number or "unlimited"). Workload parameters
live under the [workload] table.
"""
from __future__ import annotations

import math
import os
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .dispatch import Strategy
from .engine import InvalidConfig, SimConfig
from .profiles import load_profiles
from .workload import Pattern, WorkloadConfig

SEED_ENV_VAR = "EDGEFLOW_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InvalidConfig(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None


def parse_strategy(name: str) -> Strategy:
    try:
        return Strategy(name)
    except ValueError:
        valid = ", ".join(s.value for s in Strategy)
        raise InvalidConfig(f"unknown strategy {name!r} (expected one of: {valid})") from None


def parse_pattern(name: str) -> Pattern:
    try:
        return Pattern(name)
    except ValueError:
        valid = ", ".join(p.value for p in Pattern)
        raise InvalidConfig(f"unknown pattern {name!r} (expected one of: {valid})") from None


def parse_cloud_capacity(value) -> float:
    if isinstance(value, str):
        if value.lower() in ("unlimited", "inf"):
            return math.inf
        raise InvalidConfig(f"cloud_window_token_capacity: {value!r}")
    cap = float(value)
    if cap <= 0:
        raise InvalidConfig("cloud_window_token_capacity must be > 0 or 'unlimited'")
    return cap


def workload_from_dict(data: dict) -> WorkloadConfig:
    known = {
        "users", "steps", "step_seconds", "pattern", "p_base", "p_burst",
        "burst_period_steps", "burst_len_steps", "token_sizes",
        "token_weights", "input_tokens",
    }
    unknown = set(data) - known
    if unknown:
        raise InvalidConfig(f"unknown workload keys: {', '.join(sorted(unknown))}")
    kwargs = dict(data)
    if "pattern" in kwargs:
        kwargs["pattern"] = parse_pattern(kwargs["pattern"])
    for key in ("token_sizes", "token_weights"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    cfg = WorkloadConfig(**kwargs)
    cfg.validate()
    return cfg


def load_run_config(
    path: str | Path,
    strategy: str | None = None,
    seed: int | None = None,
) -> SimConfig:
    """Build a SimConfig from a TOML file; flag overrides beat file values."""
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise InvalidConfig(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise InvalidConfig(f"cannot parse {path}: {exc}") from exc

    profiles_path = data.get("profiles")
    if profiles_path is None:
        raise InvalidConfig("config must name a 'profiles' CSV")
    profiles_path = (path.parent / profiles_path).resolve()
    rate = float(data.get("electricity_rate_cents_per_kwh", 25.0))
    devices, cloud, pricing = load_profiles(profiles_path, rate)

    workload = workload_from_dict(data.get("workload", {}))
    cfg = SimConfig(
        workload=workload,
        devices=devices,
        cloud=cloud,
        pricing=pricing,
        strategy=parse_strategy(strategy or data.get("strategy", "random")),
        window_len_steps=int(data.get("window_len_steps", 5)),
        seed=seed if seed is not None else int(data.get("seed", default_seed())),
        cloud_window_token_capacity=parse_cloud_capacity(
            data.get("cloud_window_token_capacity", "unlimited")),
    )
    cfg.validate()
    return cfg
