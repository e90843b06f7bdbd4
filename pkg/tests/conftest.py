import pytest

from edgeflow.engine import SimConfig
from edgeflow.profiles import (CloudProfile, DeviceProfile, EnergyPricing,
                               UNLIMITED)
from edgeflow.workload import Pattern, WorkloadConfig

TABLE1_CSV = """\
id,tgs,ttft_s,power_w,energy_per_query_wh,quality,window_token_capacity,max_parallel,price_in,price_out
agx_qwen25_7b,20,0.28,35,0.1646,0.91,2000,2,,
nano_qwen25_3b,12,0.33,12,0.0687,0.80,1000,1,,
cloud,,0.71,,,0.97,unlimited,,0.003,0.006
"""

AGX = DeviceProfile(
    id="agx_qwen25_7b", tgs=20, ttft_s=0.28, power_w=35,
    energy_per_query_wh=0.1646, quality=0.91,
    window_token_capacity=2000, max_parallel=2,
)
NANO = DeviceProfile(
    id="nano_qwen25_3b", tgs=12, ttft_s=0.33, power_w=12,
    energy_per_query_wh=0.0687, quality=0.80,
    window_token_capacity=1000, max_parallel=1,
)
GPT4_CLOUD = CloudProfile(
    price_in_cents_per_token=0.003, price_out_cents_per_token=0.006,
    quality=0.97, ttft_s=0.71, window_token_capacity=UNLIMITED,
)


@pytest.fixture
def table1_csv(tmp_path):
    path = tmp_path / "table1.csv"
    path.write_text(TABLE1_CSV)
    return path


@pytest.fixture
def agx():
    return AGX


@pytest.fixture
def nano():
    return NANO


@pytest.fixture
def gpt4_cloud():
    return GPT4_CLOUD


def trace_device(capacity: float, tgs: float = 10, max_parallel: int = 1) -> DeviceProfile:
    return DeviceProfile(
        id="dev0", tgs=tgs, ttft_s=0.3, power_w=10,
        energy_per_query_wh=0.1, quality=0.9,
        window_token_capacity=capacity, max_parallel=max_parallel,
    )


def trace_config(capacity: float, steps: int = 3) -> SimConfig:
    """Single device, one always-active user, fixed 50-token demand, W=2.

    Hand trace with capacity 100 (scenario T1): each job occupies the single
    slot for one step (50 tokens / 10 tgs = 5 s < 60 s) and releases before
    the next arrival; window usage never exceeds 100, so all three requests
    run at the edge.

    With capacity 50 (scenario T2): step 0 admits 50; at step 1 the window
    [0, 1] already holds 50, so the arrival is refused and redirected to the
    cloud at 48 * 0.003 + 50 * 0.006 = 0.444 cents; at step 2 the step-0
    entry expires and the arrival is admitted again.
    """
    workload = WorkloadConfig(
        users=1, steps=steps, pattern=Pattern.STEADY, p_base=1.0, p_burst=1.0,
        token_sizes=(50,), token_weights=(1.0,), input_tokens=48,
    )
    return SimConfig(
        workload=workload,
        devices=[trace_device(capacity)],
        cloud=CloudProfile(price_in_cents_per_token=0.003,
                           price_out_cents_per_token=0.006,
                           quality=0.97, ttft_s=0.71),
        pricing=EnergyPricing(25.0),
        window_len_steps=2,
        seed=1,
    )
