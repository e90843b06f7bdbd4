"""Device, cloud, and electricity-pricing profiles.

Profiles are loaded from a flat CSV with header
``id,tgs,ttft_s,power_w,energy_per_query_wh,quality,window_token_capacity,max_parallel``
plus optional ``price_in,price_out`` columns. A row with id ``cloud`` defines
the cloud endpoint; its ``window_token_capacity`` may be ``unlimited``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

UNLIMITED = math.inf

# Default cloud per-token prices in cents, chosen so the 48-in / 249-out
# average request costs ~1.65 cents.
DEFAULT_PRICE_IN = 0.003
DEFAULT_PRICE_OUT = 0.006


class ProfileError(ValueError):
    """Base class for profile file problems."""


class MissingField(ProfileError):
    pass


class DuplicateId(ProfileError):
    pass


class NonPositiveCapacity(ProfileError):
    pass


class UnparseableFile(ProfileError):
    pass


@dataclass(frozen=True)
class DeviceProfile:
    id: str
    tgs: float                     # output tokens per second
    ttft_s: float                  # time to first token, seconds
    power_w: float                 # average power draw, watts
    energy_per_query_wh: float | None  # measured Wh per query; None -> derived
    quality: float                 # score in [0, 1]
    window_token_capacity: float   # tokens admitted per sliding window
    max_parallel: int              # concurrent request slots

    def derived_energy_wh(self, output_tokens: int) -> float:
        """Fallback energy estimate when no measured per-query figure exists."""
        return output_tokens / self.tgs * self.power_w / 3600.0


@dataclass(frozen=True)
class CloudProfile:
    price_in_cents_per_token: float
    price_out_cents_per_token: float
    quality: float
    ttft_s: float
    window_token_capacity: float = UNLIMITED  # UNLIMITED admits everything

    @property
    def unlimited(self) -> bool:
        return math.isinf(self.window_token_capacity)


@dataclass(frozen=True)
class EnergyPricing:
    rate_cents_per_kwh: float = 25.0


DEFAULT_CLOUD = CloudProfile(
    price_in_cents_per_token=DEFAULT_PRICE_IN,
    price_out_cents_per_token=DEFAULT_PRICE_OUT,
    quality=1.0,
    ttft_s=0.0,
)

_REQUIRED_COLUMNS = (
    "id", "tgs", "ttft_s", "power_w", "energy_per_query_wh",
    "quality", "window_token_capacity", "max_parallel",
)


def validate_profile(p: DeviceProfile) -> list[str]:
    """Return every violated invariant; empty list iff the profile is valid."""
    violations = []
    if p.tgs <= 0:
        violations.append("NonPositiveTgs")
    if p.ttft_s < 0:
        violations.append("NegativeTtft")
    if p.power_w < 0:
        violations.append("NegativePower")
    if p.energy_per_query_wh is not None and p.energy_per_query_wh < 0:
        violations.append("NegativeEnergy")
    if not 0.0 <= p.quality <= 1.0:
        violations.append("QualityOutOfRange")
    if p.window_token_capacity <= 0:
        violations.append("NonPositiveWindowCapacity")
    if p.max_parallel < 1:
        violations.append("MaxParallelTooSmall")
    return violations


def _parse_float(row: dict, record: str, field: str) -> float:
    raw = (row.get(field) or "").strip()
    if not raw:
        raise MissingField(f"record '{record}': missing field '{field}'")
    try:
        return float(raw)
    except ValueError:
        raise UnparseableFile(
            f"record '{record}': field '{field}' is not a number: {raw!r}"
        ) from None


def _parse_optional_float(row: dict, record: str, field: str) -> float | None:
    raw = (row.get(field) or "").strip()
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError:
        raise UnparseableFile(
            f"record '{record}': field '{field}' is not a number: {raw!r}"
        ) from None


def load_profiles(
    path: str | Path,
    electricity_rate_cents_per_kwh: float = 25.0,
) -> tuple[list[DeviceProfile], CloudProfile, EnergyPricing]:
    """Load device rows and the optional cloud row from a profile CSV.

    The electricity rate comes from run configuration, not the CSV; it is
    threaded through here so callers receive the complete pricing triple.
    """
    path = Path(path)
    if electricity_rate_cents_per_kwh < 0:
        raise NonPositiveCapacity("electricity rate must be >= 0")
    try:
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in _REQUIRED_COLUMNS if c not in header]
            if missing:
                raise MissingField(f"header missing columns: {', '.join(missing)}")
            rows = list(reader)
    except OSError as exc:
        raise UnparseableFile(f"cannot read {path}: {exc}") from exc

    devices: list[DeviceProfile] = []
    cloud: CloudProfile | None = None
    seen: set[str] = set()
    for row in rows:
        record = (row.get("id") or "").strip()
        if not record:
            raise MissingField("row without an id")
        if record in seen:
            raise DuplicateId(f"duplicate profile id '{record}'")
        seen.add(record)
        if record == "cloud":
            cloud = _parse_cloud_row(row)
            continue
        profile = DeviceProfile(
            id=record,
            tgs=_parse_float(row, record, "tgs"),
            ttft_s=_parse_float(row, record, "ttft_s"),
            power_w=_parse_float(row, record, "power_w"),
            energy_per_query_wh=_parse_optional_float(row, record, "energy_per_query_wh"),
            quality=_parse_float(row, record, "quality"),
            window_token_capacity=_parse_float(row, record, "window_token_capacity"),
            max_parallel=int(_parse_float(row, record, "max_parallel")),
        )
        violations = validate_profile(profile)
        positivity = {"NonPositiveTgs", "NonPositiveWindowCapacity", "MaxParallelTooSmall"}
        if positivity & set(violations):
            raise NonPositiveCapacity(f"record '{record}': {', '.join(violations)}")
        if violations:
            raise UnparseableFile(f"record '{record}': {', '.join(violations)}")
        devices.append(profile)

    if cloud is None:
        cloud = DEFAULT_CLOUD
    return devices, cloud, EnergyPricing(electricity_rate_cents_per_kwh)


def _parse_cloud_row(row: dict) -> CloudProfile:
    record = "cloud"
    cap_raw = (row.get("window_token_capacity") or "").strip().lower()
    if cap_raw in ("", "unlimited", "inf"):
        capacity = UNLIMITED
    else:
        capacity = _parse_float(row, record, "window_token_capacity")
        if capacity <= 0:
            raise NonPositiveCapacity("record 'cloud': NonPositiveWindowCapacity")
    price_in = _parse_optional_float(row, record, "price_in")
    price_out = _parse_optional_float(row, record, "price_out")
    quality = _parse_optional_float(row, record, "quality")
    ttft = _parse_optional_float(row, record, "ttft_s")
    cloud = CloudProfile(
        price_in_cents_per_token=DEFAULT_PRICE_IN if price_in is None else price_in,
        price_out_cents_per_token=DEFAULT_PRICE_OUT if price_out is None else price_out,
        quality=1.0 if quality is None else quality,
        ttft_s=0.0 if ttft is None else ttft,
        window_token_capacity=capacity,
    )
    if cloud.price_in_cents_per_token < 0 or cloud.price_out_cents_per_token < 0:
        raise NonPositiveCapacity("record 'cloud': negative token price")
    return cloud


def write_profiles(
    path: str | Path,
    devices: list[DeviceProfile],
    cloud: CloudProfile | None = None,
) -> None:
    """Write profiles back to CSV; inverse of load_profiles for valid sets."""
    path = Path(path)
    columns = list(_REQUIRED_COLUMNS) + ["price_in", "price_out"]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for d in devices:
            writer.writerow([
                d.id, d.tgs, d.ttft_s, d.power_w,
                "" if d.energy_per_query_wh is None else d.energy_per_query_wh,
                d.quality, d.window_token_capacity, d.max_parallel, "", "",
            ])
        if cloud is not None:
            cap = "unlimited" if cloud.unlimited else cloud.window_token_capacity
            writer.writerow([
                "cloud", "", cloud.ttft_s, "", "", cloud.quality, cap, "",
                cloud.price_in_cents_per_token, cloud.price_out_cents_per_token,
            ])
