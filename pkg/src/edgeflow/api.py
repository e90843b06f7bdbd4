"""HTTP service exposing the metrics engine and simulator.

All endpoints are stateless: the full configuration travels in the request
body, so any number of clients can share one server. Domain validation
failures map to 400 with the offending detail.
"""
from __future__ import annotations

import math
from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .config import parse_strategy, workload_from_dict
from .engine import InvalidConfig, SimConfig, run_simulation
from .metrics import AlphaOutOfRange, platform_report
from .profiles import (CloudProfile, DeviceProfile, EnergyPricing,
                       ProfileError, validate_profile)
from .runner import run_compare, run_sweep, seed_list
from .workload import InvalidProbability, InvalidWeights

app = FastAPI(title="edgeflow", version=__version__)


class DeviceProfileModel(BaseModel):
    id: str
    tgs: float
    ttft_s: float = 0.0
    power_w: float = 0.0
    energy_per_query_wh: float | None = None
    quality: float = 1.0
    window_token_capacity: float
    max_parallel: int = 1

    def to_domain(self) -> DeviceProfile:
        return DeviceProfile(**self.model_dump())


class CloudProfileModel(BaseModel):
    price_in_cents_per_token: float = 0.003
    price_out_cents_per_token: float = 0.006
    quality: float = 1.0
    ttft_s: float = 0.0
    window_token_capacity: float | Literal["unlimited"] = "unlimited"

    def to_domain(self) -> CloudProfile:
        cap = self.window_token_capacity
        return CloudProfile(
            price_in_cents_per_token=self.price_in_cents_per_token,
            price_out_cents_per_token=self.price_out_cents_per_token,
            quality=self.quality,
            ttft_s=self.ttft_s,
            window_token_capacity=math.inf if cap == "unlimited" else float(cap),
        )


class WorkloadModel(BaseModel):
    users: int = 30
    steps: int = 60
    step_seconds: float = 60.0
    pattern: Literal["steady", "bursty"] = "steady"
    p_base: float = 0.3
    p_burst: float = 0.8
    burst_period_steps: int = 10
    burst_len_steps: int = 1
    token_sizes: list[int] = [50, 100, 200, 300, 500]
    token_weights: list[float] = [0.35, 0.30, 0.20, 0.10, 0.05]
    input_tokens: int = 48


class SimConfigModel(BaseModel):
    devices: list[DeviceProfileModel]
    cloud: CloudProfileModel = CloudProfileModel()
    workload: WorkloadModel = WorkloadModel()
    strategy: Literal["random", "weighted", "load_aware"] = "random"
    window_len_steps: int = 5
    seed: int = 0
    cloud_window_token_capacity: float | Literal["unlimited"] = "unlimited"
    electricity_rate_cents_per_kwh: float = 25.0

    def to_domain(self) -> SimConfig:
        devices = [d.to_domain() for d in self.devices]
        for d in devices:
            violations = validate_profile(d)
            if violations:
                raise InvalidConfig(f"device '{d.id}': {', '.join(violations)}")
        cap = self.cloud_window_token_capacity
        cfg = SimConfig(
            workload=workload_from_dict(self.workload.model_dump()),
            devices=devices,
            cloud=self.cloud.to_domain(),
            pricing=EnergyPricing(self.electricity_rate_cents_per_kwh),
            strategy=parse_strategy(self.strategy),
            window_len_steps=self.window_len_steps,
            seed=self.seed,
            cloud_window_token_capacity=math.inf if cap == "unlimited" else float(cap),
        )
        cfg.validate()
        return cfg


class MetricsRequest(BaseModel):
    devices: list[DeviceProfileModel]
    cloud: CloudProfileModel = CloudProfileModel()
    electricity_rate_cents_per_kwh: float = 25.0
    alpha: float = Field(0.5, ge=0.0, le=1.0)
    avg_in: int = Field(48, ge=0)
    avg_out: int = Field(249, ge=0)
    r_mode: Literal["raw", "inverse_ttft"] = "raw"


class PlatformRowModel(BaseModel):
    platform: str
    cpr_cents: float
    q: float
    r: float
    utility: float
    pcr: float


class MetricsResponse(BaseModel):
    rows: list[PlatformRowModel]


class SimulateRequest(BaseModel):
    config: SimConfigModel
    include_outcomes: bool = False


class CompareRequest(BaseModel):
    config: SimConfigModel
    seeds: int = Field(30, ge=1)
    base_seed: int = 0


class SweepRequest(BaseModel):
    config: SimConfigModel
    windows: list[int] = [1, 2, 5, 10]
    seeds: int = Field(10, ge=1)
    base_seed: int = 0


_DOMAIN_ERRORS = (InvalidConfig, InvalidWeights, InvalidProbability,
                  ProfileError, AlphaOutOfRange, ValueError)


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/metrics", response_model=MetricsResponse)
def metrics_endpoint(req: MetricsRequest) -> MetricsResponse:
    try:
        rows = platform_report(
            [d.to_domain() for d in req.devices],
            req.cloud.to_domain(),
            EnergyPricing(req.electricity_rate_cents_per_kwh),
            alpha=req.alpha, avg_in=req.avg_in, avg_out=req.avg_out,
            r_mode=req.r_mode,
        )
    except _DOMAIN_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return MetricsResponse(rows=[PlatformRowModel(**vars(r)) for r in rows])


@app.post("/simulate")
def simulate_endpoint(req: SimulateRequest) -> dict:
    try:
        report = run_simulation(req.config.to_domain())
    except _DOMAIN_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return report.to_dict(include_outcomes=req.include_outcomes)


@app.post("/compare")
def compare_endpoint(req: CompareRequest) -> dict:
    try:
        cells = run_compare(req.config.to_domain(),
                            seed_list(req.base_seed, req.seeds))
    except _DOMAIN_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return {"cells": [c.to_dict() for c in cells]}


@app.post("/sweep")
def sweep_endpoint(req: SweepRequest) -> dict:
    try:
        rows = run_sweep(req.config.to_domain(), req.windows,
                         seed_list(req.base_seed, req.seeds))
    except _DOMAIN_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return {"rows": rows}
