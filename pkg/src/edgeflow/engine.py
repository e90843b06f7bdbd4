"""Discrete-time simulation loop and run accounting.

Each step: advance every sliding window, release jobs finishing now,
dispatch the step's arrivals in request-id order, and record a StepRecord.
The run report carries the full per-step series, per-device utilization,
and aggregate counters that satisfy the conservation identities:

    generated = edge_processed + cloud_redirected + dropped
    cloud_tokens_in_out = sum of (input + output) over cloud redirections

``tokens_to_cloud`` counts redirected output-token demand (the quantity a
device window would have absorbed); ``cloud_tokens_in_out`` additionally
includes input tokens, matching what the cloud bills and rate-limits.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field

import numpy as np

from .dispatch import (Decision, DeviceRuntime, DispatchOutcome, Strategy,
                       dispatch_request)
from .profiles import CloudProfile, DeviceProfile, EnergyPricing
from .ratelimit import WindowState
from .workload import WorkloadConfig, generate_requests


class InvalidConfig(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    workload: WorkloadConfig
    devices: list[DeviceProfile]
    cloud: CloudProfile
    pricing: EnergyPricing
    strategy: Strategy = Strategy.RANDOM
    window_len_steps: int = 5
    seed: int = 0
    cloud_window_token_capacity: float = math.inf

    def validate(self) -> None:
        self.workload.validate()
        if not self.devices:
            raise InvalidConfig("at least one device profile is required")
        if self.window_len_steps < 1:
            raise InvalidConfig("window_len_steps must be >= 1")
        if self.cloud_window_token_capacity <= 0:
            raise InvalidConfig("cloud window capacity must be > 0 or unlimited")


@dataclass
class StepRecord:
    step: int
    arrivals: int = 0
    edge_accepted: int = 0
    edge_rejected: int = 0
    cloud_redirected: int = 0
    dropped: int = 0
    tokens_to_cloud: int = 0
    cloud_tokens_in_out: int = 0
    cloud_cost_cents: float = 0.0
    window_used: dict[str, float] = field(default_factory=dict)
    busy_slots: dict[str, int] = field(default_factory=dict)
    utilization: dict[str, float] = field(default_factory=dict)


@dataclass
class RunTotals:
    requests: int = 0
    edge_processed: int = 0
    cloud_redirected: int = 0
    dropped: int = 0
    tokens_to_cloud: int = 0
    cloud_tokens_in_out: int = 0
    cloud_cost_cents: float = 0.0
    edge_energy_wh: float = 0.0
    edge_energy_cost_cents: float = 0.0
    in_flight_at_end: int = 0
    energy_fallback_used: bool = False


@dataclass
class RunReport:
    config: dict
    steps: list[StepRecord]
    totals: RunTotals
    device_ids: list[str]
    utilization_mean: dict[str, float]
    utilization_std_across_devices: float
    outcomes: list[DispatchOutcome] = field(default_factory=list)

    def to_dict(self, include_outcomes: bool = False) -> dict:
        d = {
            "config": self.config,
            "totals": vars(self.totals).copy(),
            "device_ids": list(self.device_ids),
            "utilization_mean": dict(self.utilization_mean),
            "utilization_std_across_devices": self.utilization_std_across_devices,
            "steps": [
                {
                    "step": s.step,
                    "arrivals": s.arrivals,
                    "edge_accepted": s.edge_accepted,
                    "edge_rejected": s.edge_rejected,
                    "cloud_redirected": s.cloud_redirected,
                    "dropped": s.dropped,
                    "tokens_to_cloud": s.tokens_to_cloud,
                    "cloud_tokens_in_out": s.cloud_tokens_in_out,
                    "cloud_cost_cents": s.cloud_cost_cents,
                    "window_used": dict(s.window_used),
                    "busy_slots": dict(s.busy_slots),
                    "utilization": dict(s.utilization),
                }
                for s in self.steps
            ],
        }
        if include_outcomes:
            d["outcomes"] = [
                {
                    "request_id": o.request_id,
                    "decision": o.decision.value,
                    "device_id": o.device_id,
                    "output_tokens": o.output_tokens,
                    "input_tokens": o.input_tokens,
                    "cost_cents": o.cost_cents,
                    "finish_step": o.finish_step,
                }
                for o in self.outcomes
            ]
        return d


def run_simulation(cfg: SimConfig) -> RunReport:
    cfg.validate()
    runtimes = [
        DeviceRuntime(profile=p, window=WindowState(cfg.window_len_steps,
                                                    p.window_token_capacity))
        for p in cfg.devices
    ]
    cloud_cap = min(cfg.cloud_window_token_capacity, cfg.cloud.window_token_capacity)
    cloud_window = (None if math.isinf(cloud_cap)
                    else WindowState(cfg.window_len_steps, cloud_cap))

    requests = generate_requests(cfg.workload, cfg.seed)
    by_step: dict[int, list] = {}
    for r in requests:
        by_step.setdefault(r.arrival_step, []).append(r)

    # Stream 2 of the master seed; streams 0/1 belong to workload generation.
    dispatch_rng = np.random.default_rng(np.random.SeedSequence(cfg.seed).spawn(3)[2])

    steps: list[StepRecord] = []
    outcomes: list[DispatchOutcome] = []
    totals = RunTotals(requests=len(requests))
    profiles_by_id = {p.id: p for p in cfg.devices}

    for now in range(cfg.workload.steps):
        rec = StepRecord(step=now)
        for rt in runtimes:
            rt.window.advance(now)
            rt.release_finished(now)
        if cloud_window is not None:
            cloud_window.advance(now)

        for req in by_step.get(now, ()):
            outcome = dispatch_request(
                req, runtimes, cfg.cloud, cloud_window, cfg.strategy,
                now, cfg.workload.step_seconds, dispatch_rng)
            outcomes.append(outcome)
            rec.arrivals += 1
            if outcome.decision is Decision.EDGE:
                rec.edge_accepted += 1
                totals.edge_processed += 1
                profile = profiles_by_id[outcome.device_id]
                energy = profile.energy_per_query_wh
                if energy is None:
                    energy = profile.derived_energy_wh(outcome.output_tokens)
                    totals.energy_fallback_used = True
                totals.edge_energy_wh += energy
            else:
                rec.edge_rejected += 1
                if outcome.decision is Decision.CLOUD:
                    rec.cloud_redirected += 1
                    rec.tokens_to_cloud += outcome.output_tokens
                    rec.cloud_tokens_in_out += outcome.input_tokens + outcome.output_tokens
                    rec.cloud_cost_cents += outcome.cost_cents
                    totals.cloud_redirected += 1
                    totals.tokens_to_cloud += outcome.output_tokens
                    totals.cloud_tokens_in_out += (outcome.input_tokens
                                                   + outcome.output_tokens)
                    totals.cloud_cost_cents += outcome.cost_cents
                else:
                    rec.dropped += 1
                    totals.dropped += 1

        for rt in runtimes:
            used = rt.window.window_used()
            rec.window_used[rt.profile.id] = used
            rec.busy_slots[rt.profile.id] = rt.busy_slots
            rec.utilization[rt.profile.id] = used / rt.profile.window_token_capacity
        steps.append(rec)

    totals.in_flight_at_end = sum(rt.busy_slots for rt in runtimes)
    totals.edge_energy_cost_cents = (
        totals.edge_energy_wh / 1000.0 * cfg.pricing.rate_cents_per_kwh)

    device_ids = [p.id for p in cfg.devices]
    util_mean = {
        did: (statistics.fmean(s.utilization[did] for s in steps) if steps else 0.0)
        for did in device_ids
    }
    util_std = (statistics.pstdev(util_mean.values()) if len(util_mean) > 1 else 0.0)

    return RunReport(
        config=config_echo(cfg),
        steps=steps,
        totals=totals,
        device_ids=device_ids,
        utilization_mean=util_mean,
        utilization_std_across_devices=util_std,
        outcomes=outcomes,
    )


def utilization_stats(report: RunReport) -> tuple[dict[str, float], float, list[dict[str, float]]]:
    """(per-device mean utilization, cross-device std of means, per-step series)."""
    series = [dict(s.utilization) for s in report.steps]
    return report.utilization_mean, report.utilization_std_across_devices, series


def edge_energy_total(report: RunReport) -> tuple[float, float]:
    """(watt-hours, cents) consumed by all edge-served requests in the run."""
    return report.totals.edge_energy_wh, report.totals.edge_energy_cost_cents


def config_echo(cfg: SimConfig) -> dict:
    return {
        "strategy": cfg.strategy.value,
        "window_len_steps": cfg.window_len_steps,
        "seed": cfg.seed,
        "cloud_window_token_capacity": (
            "unlimited" if math.isinf(cfg.cloud_window_token_capacity)
            else cfg.cloud_window_token_capacity),
        "electricity_rate_cents_per_kwh": cfg.pricing.rate_cents_per_kwh,
        "workload": {
            "users": cfg.workload.users,
            "steps": cfg.workload.steps,
            "step_seconds": cfg.workload.step_seconds,
            "pattern": cfg.workload.pattern.value,
            "p_base": cfg.workload.p_base,
            "p_burst": cfg.workload.p_burst,
            "burst_period_steps": cfg.workload.burst_period_steps,
            "burst_len_steps": cfg.workload.burst_len_steps,
            "token_sizes": list(cfg.workload.token_sizes),
            "token_weights": list(cfg.workload.token_weights),
            "input_tokens": cfg.workload.input_tokens,
        },
        "devices": [
            {
                "id": p.id,
                "tgs": p.tgs,
                "ttft_s": p.ttft_s,
                "power_w": p.power_w,
                "energy_per_query_wh": p.energy_per_query_wh,
                "quality": p.quality,
                "window_token_capacity": p.window_token_capacity,
                "max_parallel": p.max_parallel,
            }
            for p in cfg.devices
        ],
        "cloud": {
            "price_in_cents_per_token": cfg.cloud.price_in_cents_per_token,
            "price_out_cents_per_token": cfg.cloud.price_out_cents_per_token,
            "quality": cfg.cloud.quality,
            "ttft_s": cfg.cloud.ttft_s,
            "window_token_capacity": (
                "unlimited" if cfg.cloud.unlimited else cfg.cloud.window_token_capacity),
        },
    }
