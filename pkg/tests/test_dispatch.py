import math
from collections import Counter

import numpy as np
import pytest

from edgeflow.dispatch import (Decision, DeviceRuntime, NoDevices, Strategy,
                               dispatch_request, select_load_aware,
                               select_random, select_weighted, service_steps)
from edgeflow.profiles import CloudProfile, DeviceProfile
from edgeflow.ratelimit import WindowState
from edgeflow.workload import Request

UNLIMITED_CLOUD = CloudProfile(0.003, 0.006, 0.97, 0.71)


def runtime(capacity=100, window=2, max_parallel=1, tgs=10, dev_id="dev0"):
    profile = DeviceProfile(id=dev_id, tgs=tgs, ttft_s=0.3, power_w=10,
                            energy_per_query_wh=0.1, quality=0.9,
                            window_token_capacity=capacity,
                            max_parallel=max_parallel)
    return DeviceRuntime(profile=profile, window=WindowState(window, capacity))


def fleet(capacities, max_parallel=4):
    return [runtime(capacity=c, max_parallel=max_parallel, dev_id=f"d{i}")
            for i, c in enumerate(capacities)]


def request(rid=0, out_tokens=50, step=0):
    return Request(id=rid, user=0, arrival_step=step,
                   output_tokens=out_tokens, input_tokens=48)


def test_random_uniform_frequencies():
    devices = fleet([100, 200, 400, 800])
    rng = np.random.default_rng(1)
    counts = Counter(select_random(devices, rng) for _ in range(100_000))
    for i in range(4):
        assert counts[i] / 100_000 == pytest.approx(0.25, abs=0.01)


def test_random_single_device():
    rng = np.random.default_rng(1)
    assert select_random(fleet([100]), rng) == 0


def test_random_empty_raises():
    with pytest.raises(NoDevices):
        select_random([], np.random.default_rng(1))


def test_weighted_proportional_frequencies():
    devices = fleet([300, 100])
    rng = np.random.default_rng(2)
    counts = Counter(select_weighted(devices, rng) for _ in range(100_000))
    assert counts[0] / 100_000 == pytest.approx(0.75, abs=0.01)
    assert counts[1] / 100_000 == pytest.approx(0.25, abs=0.01)


def test_weighted_equal_capacities_is_uniform():
    devices = fleet([200, 200, 200])
    rng = np.random.default_rng(3)
    counts = Counter(select_weighted(devices, rng) for _ in range(60_000))
    for i in range(3):
        assert counts[i] / 60_000 == pytest.approx(1 / 3, abs=0.01)


def test_weighted_single_device():
    assert select_weighted(fleet([42]), np.random.default_rng(0)) == 0


def test_weighted_empty_raises():
    with pytest.raises(NoDevices):
        select_weighted([], np.random.default_rng(1))


def test_load_aware_argmax_available():
    devices = fleet([100, 100])
    devices[0].window.try_admit(0, 80)   # available 20
    devices[1].window.try_admit(0, 20)   # available 80
    assert select_load_aware(devices, 0) == 1


def test_load_aware_all_slots_busy():
    devices = fleet([100, 100], max_parallel=1)
    for d in devices:
        d.active_jobs.append((99, 5))
    assert select_load_aware(devices, 0) is None


def test_load_aware_tie_breaks_low_index():
    devices = fleet([100, 100])
    devices[0].window.try_admit(0, 50)
    devices[1].window.try_admit(0, 50)
    assert select_load_aware(devices, 0) == 0


def test_load_aware_skips_full_devices():
    devices = fleet([100, 100], max_parallel=1)
    devices[0].active_jobs.append((7, 9))
    assert select_load_aware(devices, 0) == 1


def test_service_steps_minimum_one():
    assert service_steps(50, 10, 60.0) == 1      # 5 s of work
    assert service_steps(500, 5, 60.0) == 2      # 100 s of work
    assert service_steps(1, 1000, 60.0) == 1


def test_dispatch_t2_trace():
    # one device, capacity 50, W=2; 50-token requests at steps 0, 1, 2
    dev = runtime(capacity=50)
    rng = np.random.default_rng(0)
    decisions = []
    costs = []
    for step in range(3):
        dev.window.advance(step)
        dev.release_finished(step)
        out = dispatch_request(request(rid=step, step=step), [dev],
                               UNLIMITED_CLOUD, None, Strategy.RANDOM,
                               step, 60.0, rng)
        decisions.append(out.decision)
        costs.append(out.cost_cents)
    assert decisions == [Decision.EDGE, Decision.CLOUD, Decision.EDGE]
    # hand-traced cloud cost: 48 * 0.003 + 50 * 0.006
    assert costs[1] == pytest.approx(0.444)
    assert costs[0] == costs[2] == 0.0


def test_unlimited_cloud_never_drops():
    dev = runtime(capacity=50, max_parallel=1)
    rng = np.random.default_rng(0)
    dev.window.advance(0)
    outs = [dispatch_request(request(rid=i), [dev], UNLIMITED_CLOUD, None,
                             Strategy.RANDOM, 0, 60.0, rng)
            for i in range(20)]
    assert all(o.decision is not Decision.DROPPED for o in outs)


def test_finite_cloud_window_drops():
    dev = runtime(capacity=50, max_parallel=1)
    cloud_window = WindowState(2, 100)  # fits one 98-token redirection
    rng = np.random.default_rng(0)
    dev.window.advance(0)
    cloud_window.advance(0)
    outs = [dispatch_request(request(rid=i), [dev], UNLIMITED_CLOUD,
                             cloud_window, Strategy.RANDOM, 0, 60.0, rng)
            for i in range(3)]
    assert [o.decision for o in outs] == [
        Decision.EDGE, Decision.CLOUD, Decision.DROPPED]
    assert outs[2].cost_cents == 0.0


def test_load_aware_full_fleet_goes_cloud():
    devices = fleet([100, 100], max_parallel=1)
    for d in devices:
        d.active_jobs.append((99, 5))
    out = dispatch_request(request(), devices, UNLIMITED_CLOUD, None,
                           Strategy.LOAD_AWARE, 0, 60.0,
                           np.random.default_rng(0))
    assert out.decision is Decision.CLOUD


def test_single_attempt_no_second_probe():
    # two devices: the chosen one is full, the other empty; random/weighted
    # must not fall back to the empty one
    for strategy in (Strategy.RANDOM, Strategy.WEIGHTED):
        devices = fleet([100, 100], max_parallel=4)
        rng = np.random.default_rng(5)
        edge_device_ids = set()
        cloud_count = 0
        devices[0].window.try_admit(0, 100)  # d0 window full
        for i in range(50):
            out = dispatch_request(request(rid=i), devices, UNLIMITED_CLOUD,
                                   None, strategy, 0, 60.0, rng)
            if out.decision is Decision.EDGE:
                edge_device_ids.add(out.device_id)
            else:
                cloud_count += 1
        assert cloud_count > 0  # picks of the full device were not retried
        assert "d0" not in edge_device_ids


def test_slot_occupation_and_release():
    dev = runtime(capacity=1000, max_parallel=1, tgs=5)
    rng = np.random.default_rng(0)
    dev.window.advance(0)
    out = dispatch_request(request(out_tokens=500), [dev], UNLIMITED_CLOUD,
                           None, Strategy.RANDOM, 0, 60.0, rng)
    assert out.decision is Decision.EDGE
    assert out.finish_step == 2  # 100 s at 60 s steps
    assert dev.busy_slots == 1
    assert dev.release_finished(1) == 0
    assert dev.release_finished(2) == 1
    assert dev.busy_slots == 0
