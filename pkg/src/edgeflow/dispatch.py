"""Device-selection strategies and the per-request admission decision.

Three strategies pick a candidate device: random (uniform, blind to load),
weighted (probability proportional to window capacity), and load-aware
(most available window tokens among devices with a free slot). A request
refused at the edge is redirected to the cloud; if a finite cloud window
also refuses it, the request is dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .metrics import cpr_cloud
from .profiles import CloudProfile, DeviceProfile
from .ratelimit import WindowState


class NoDevices(ValueError):
    pass


class ZeroTotalCapacity(ValueError):
    pass


class Strategy(str, Enum):
    RANDOM = "random"
    WEIGHTED = "weighted"
    LOAD_AWARE = "load_aware"


class Decision(str, Enum):
    EDGE = "edge"
    CLOUD = "cloud"
    DROPPED = "dropped"


@dataclass
class DeviceRuntime:
    profile: DeviceProfile
    window: WindowState
    active_jobs: list[tuple[int, int]] = field(default_factory=list)  # (request id, finish step)

    @property
    def busy_slots(self) -> int:
        return len(self.active_jobs)

    def has_free_slot(self) -> bool:
        return self.busy_slots < self.profile.max_parallel

    def release_finished(self, now: int) -> int:
        """Free slots whose jobs complete at or before now; return the count."""
        before = len(self.active_jobs)
        self.active_jobs = [job for job in self.active_jobs if job[1] > now]
        return before - len(self.active_jobs)


@dataclass(frozen=True)
class DispatchOutcome:
    request_id: int
    decision: Decision
    device_id: str | None
    output_tokens: int
    input_tokens: int
    cost_cents: float
    finish_step: int | None = None


def select_random(devices: list[DeviceRuntime], rng: np.random.Generator) -> int:
    if not devices:
        raise NoDevices("no devices to select from")
    return int(rng.integers(len(devices)))


def select_weighted(devices: list[DeviceRuntime], rng: np.random.Generator) -> int:
    if not devices:
        raise NoDevices("no devices to select from")
    caps = np.array([d.profile.window_token_capacity for d in devices], dtype=float)
    total = caps.sum()
    if total <= 0:
        raise ZeroTotalCapacity("device capacities sum to zero")
    return int(rng.choice(len(devices), p=caps / total))


def select_load_aware(devices: list[DeviceRuntime], now: int) -> int | None:
    """Argmax of available window tokens among free-slot devices; ties to the
    lowest index. None when every device is slot-saturated."""
    best: int | None = None
    best_avail = -math.inf
    for i, d in enumerate(devices):
        if not d.has_free_slot():
            continue
        avail = d.window.available()
        if avail > best_avail:
            best, best_avail = i, avail
    return best


def service_steps(output_tokens: int, tgs: float, step_seconds: float) -> int:
    """Whole simulation steps a job occupies a slot; at least one."""
    return max(1, math.ceil(output_tokens / tgs / step_seconds))


def dispatch_request(
    request,
    devices: list[DeviceRuntime],
    cloud: CloudProfile,
    cloud_window: WindowState | None,
    strategy: Strategy,
    now: int,
    step_seconds: float,
    rng: np.random.Generator,
) -> DispatchOutcome:
    """Route one request: edge if the strategy's single candidate admits it,
    else cloud, else dropped. Random and weighted never probe a second device."""
    if strategy is Strategy.LOAD_AWARE:
        candidate = select_load_aware(devices, now)
    elif strategy is Strategy.WEIGHTED:
        candidate = select_weighted(devices, rng)
    else:
        candidate = select_random(devices, rng)

    if candidate is not None:
        dev = devices[candidate]
        if dev.has_free_slot() and dev.window.try_admit(now, request.output_tokens):
            finish = now + service_steps(
                request.output_tokens, dev.profile.tgs, step_seconds)
            dev.active_jobs.append((request.id, finish))
            return DispatchOutcome(
                request_id=request.id, decision=Decision.EDGE,
                device_id=dev.profile.id, output_tokens=request.output_tokens,
                input_tokens=request.input_tokens, cost_cents=0.0,
                finish_step=finish,
            )

    cloud_tokens = request.input_tokens + request.output_tokens
    admitted = cloud_window is None or cloud_window.try_admit(now, cloud_tokens)
    if admitted:
        cost = cpr_cloud(request.input_tokens, request.output_tokens, cloud).cents
        return DispatchOutcome(
            request_id=request.id, decision=Decision.CLOUD, device_id=None,
            output_tokens=request.output_tokens, input_tokens=request.input_tokens,
            cost_cents=cost,
        )
    return DispatchOutcome(
        request_id=request.id, decision=Decision.DROPPED, device_id=None,
        output_tokens=request.output_tokens, input_tokens=request.input_tokens,
        cost_cents=0.0,
    )
