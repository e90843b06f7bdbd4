"""Utility, cost-per-response (CPR), and performance-cost ratio (PCR) metrics.

Utility blends a quality score with a responsiveness score via a weight
alpha. CPR is cents per response: token-priced API usage for the cloud,
energy times electricity rate for an edge device. PCR = utility / CPR.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .profiles import CloudProfile, DeviceProfile, EnergyPricing


class AlphaOutOfRange(ValueError):
    pass


class ZeroCost(ZeroDivisionError):
    pass


class CostSource(str, Enum):
    EDGE = "edge"
    CLOUD = "cloud"


@dataclass(frozen=True)
class CostPerResponse:
    cents: float
    source: CostSource


@dataclass(frozen=True)
class PlatformRow:
    platform: str
    cpr_cents: float
    q: float
    r: float
    utility: float
    pcr: float


def utility(q: float, r: float, alpha: float) -> float:
    """Weighted blend alpha*q + (1-alpha)*r."""
    if not 0.0 <= alpha <= 1.0:
        raise AlphaOutOfRange(f"alpha must be in [0, 1], got {alpha}")
    return alpha * q + (1.0 - alpha) * r


def cpr_cloud(input_tokens: int, output_tokens: int, cloud: CloudProfile) -> CostPerResponse:
    """Cloud cost: per-token prices applied to input and output counts."""
    if input_tokens < 0 or output_tokens < 0:
        raise ValueError("token counts must be >= 0")
    cents = (
        input_tokens * cloud.price_in_cents_per_token
        + output_tokens * cloud.price_out_cents_per_token
    )
    return CostPerResponse(cents=cents, source=CostSource.CLOUD)


def cpr_edge(energy_wh: float, pricing: EnergyPricing) -> CostPerResponse:
    """Edge cost: energy in kWh times the electricity rate in cents/kWh."""
    if energy_wh < 0:
        raise ValueError("energy must be >= 0")
    cents = energy_wh / 1000.0 * pricing.rate_cents_per_kwh
    return CostPerResponse(cents=cents, source=CostSource.EDGE)


def pcr(u: float, cpr: CostPerResponse) -> float:
    """Performance-cost ratio u / cpr.cents; undefined at zero cost."""
    if cpr.cents <= 0:
        raise ZeroCost("PCR is undefined for zero or negative cost")
    return u / cpr.cents


def responsiveness(ttft_s: float, r_mode: str = "raw") -> float:
    """Map TTFT to the responsiveness score R.

    'raw' feeds TTFT seconds straight into the utility blend, which is what
    the published platform comparison does. 'inverse_ttft' gives a
    higher-is-better alternative r = 1 / (1 + ttft).
    """
    if r_mode == "raw":
        return ttft_s
    if r_mode == "inverse_ttft":
        return 1.0 / (1.0 + ttft_s)
    raise ValueError(f"unknown r_mode: {r_mode!r}")


def platform_report(
    devices: list[DeviceProfile],
    cloud: CloudProfile,
    pricing: EnergyPricing,
    alpha: float,
    avg_in: int,
    avg_out: int,
    r_mode: str = "raw",
) -> list[PlatformRow]:
    """One row per platform: cloud first, then devices by descending PCR.

    Row values carry report rounding (CPR to 4 decimals, U to 3, PCR to 2)
    and PCR divides the rounded CPR, matching the published table arithmetic.
    """
    rows = [_make_row("cloud", cpr_cloud(avg_in, avg_out, cloud).cents,
                      cloud.quality, responsiveness(cloud.ttft_s, r_mode), alpha)]
    device_rows = []
    for d in devices:
        energy = d.energy_per_query_wh
        if energy is None:
            energy = d.derived_energy_wh(avg_out)
        device_rows.append(_make_row(
            d.id, cpr_edge(energy, pricing).cents,
            d.quality, responsiveness(d.ttft_s, r_mode), alpha,
        ))
    device_rows.sort(key=lambda row: (-row.pcr, row.platform))
    return rows + device_rows


def _make_row(platform: str, cpr_cents: float, q: float, r: float, alpha: float) -> PlatformRow:
    u = round(utility(q, r, alpha), 3)
    cpr_rounded = round(cpr_cents, 4)
    ratio = round(pcr(u, CostPerResponse(cpr_rounded, CostSource.CLOUD)), 2)
    return PlatformRow(platform=platform, cpr_cents=cpr_rounded, q=q, r=r,
                       utility=u, pcr=ratio)
