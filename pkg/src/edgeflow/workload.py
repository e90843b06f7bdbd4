"""Seeded request-stream generation for steady and bursty arrival patterns.

Each user is a Bernoulli source per step: active with probability p_base,
raised to p_burst on burst steps. Output-token demand is drawn from a
weighted set of typical sizes. Activity and demand use separate RNG streams
split from the master seed, so changing token weights never perturbs the
arrival pattern.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class InvalidWeights(ValueError):
    pass


class InvalidProbability(ValueError):
    pass


class Pattern(str, Enum):
    STEADY = "steady"
    BURSTY = "bursty"


@dataclass(frozen=True)
class WorkloadConfig:
    users: int = 30
    steps: int = 60
    step_seconds: float = 60.0
    pattern: Pattern = Pattern.STEADY
    p_base: float = 0.3
    p_burst: float = 0.8
    burst_period_steps: int = 10
    burst_len_steps: int = 1
    token_sizes: tuple[int, ...] = (50, 100, 200, 300, 500)
    token_weights: tuple[float, ...] = (0.35, 0.30, 0.20, 0.10, 0.05)
    input_tokens: int = 48

    def validate(self) -> None:
        if not (0.0 <= self.p_base <= 1.0 and 0.0 <= self.p_burst <= 1.0):
            raise InvalidProbability("activity probabilities must be in [0, 1]")
        if self.p_base > self.p_burst:
            raise InvalidProbability("p_base must not exceed p_burst")
        if self.burst_period_steps < 1 or self.burst_len_steps < 1:
            raise ValueError("burst period and length must be >= 1")
        if len(self.token_sizes) != len(self.token_weights):
            raise InvalidWeights("token_sizes and token_weights lengths differ")
        if any(w < 0 for w in self.token_weights):
            raise InvalidWeights("token weights must be >= 0")
        if abs(sum(self.token_weights) - 1.0) > 1e-9:
            raise InvalidWeights(f"token weights sum to {sum(self.token_weights)}, not 1")


@dataclass(frozen=True)
class Request:
    id: int
    user: int
    arrival_step: int
    output_tokens: int
    input_tokens: int


def is_burst_step(step: int, cfg: WorkloadConfig) -> bool:
    """Bursts land at whole periods (step 0 excluded) for burst_len_steps."""
    if cfg.pattern is not Pattern.BURSTY:
        return False
    for offset in range(cfg.burst_len_steps):
        s = step - offset
        if s > 0 and s % cfg.burst_period_steps == 0:
            return True
    return False


def sample_token_demand(rng: np.random.Generator, cfg: WorkloadConfig) -> int:
    cfg.validate()
    idx = rng.choice(len(cfg.token_sizes), p=np.asarray(cfg.token_weights, dtype=float))
    return int(cfg.token_sizes[idx])


def workload_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """(activity, demand) generators split deterministically from the seed."""
    activity_ss, demand_ss = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(activity_ss), np.random.default_rng(demand_ss)


def generate_requests(cfg: WorkloadConfig, seed: int) -> list[Request]:
    """Emit requests ordered by (arrival_step, user) with dense ids from 0."""
    cfg.validate()
    activity_rng, demand_rng = workload_streams(seed)
    requests: list[Request] = []
    for step in range(cfg.steps):
        p = cfg.p_burst if is_burst_step(step, cfg) else cfg.p_base
        for user in range(cfg.users):
            if activity_rng.random() < p:
                demand = sample_token_demand(demand_rng, cfg)
                requests.append(Request(
                    id=len(requests),
                    user=user,
                    arrival_step=step,
                    output_tokens=demand,
                    input_tokens=cfg.input_tokens,
                ))
    return requests
