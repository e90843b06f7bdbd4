"""Multi-run orchestration: strategy comparisons and window-size sweeps.

Cells are evaluated in a fixed (strategy, pattern, seed) order so output is
deterministic for a given seed list regardless of where runs execute.
"""
from __future__ import annotations

import statistics
from dataclasses import dataclass, replace

from .dispatch import Strategy
from .engine import RunReport, SimConfig, run_simulation
from .workload import Pattern

COMPARE_METRICS = (
    "edge_processed", "edge_rejected", "tokens_to_cloud",
    "cloud_cost_cents", "utilization_std",
)


@dataclass(frozen=True)
class CellStats:
    strategy: str
    pattern: str
    seeds: int
    means: dict[str, float]
    stds: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "pattern": self.pattern,
            "seeds": self.seeds,
            "means": dict(self.means),
            "stds": dict(self.stds),
        }


def _run_metrics(report: RunReport) -> dict[str, float]:
    t = report.totals
    return {
        "edge_processed": float(t.edge_processed),
        "edge_rejected": float(t.cloud_redirected + t.dropped),
        "tokens_to_cloud": float(t.tokens_to_cloud),
        "cloud_cost_cents": t.cloud_cost_cents,
        "utilization_std": report.utilization_std_across_devices,
    }


def _aggregate(strategy: Strategy, pattern: Pattern, samples: list[dict[str, float]]) -> CellStats:
    means = {m: statistics.fmean(s[m] for s in samples) for m in COMPARE_METRICS}
    stds = {
        m: (statistics.pstdev(s[m] for s in samples) if len(samples) > 1 else 0.0)
        for m in COMPARE_METRICS
    }
    return CellStats(strategy=strategy.value, pattern=pattern.value,
                     seeds=len(samples), means=means, stds=stds)


def seed_list(base_seed: int, count: int) -> list[int]:
    if count < 1:
        raise ValueError("seed count must be >= 1")
    return [base_seed + i for i in range(count)]


def run_compare(base: SimConfig, seeds: list[int]) -> list[CellStats]:
    """All strategies crossed with steady/bursty patterns over the seed list."""
    cells = []
    for strategy in (Strategy.RANDOM, Strategy.WEIGHTED, Strategy.LOAD_AWARE):
        for pattern in (Pattern.STEADY, Pattern.BURSTY):
            samples = []
            for seed in seeds:
                cfg = replace(
                    base, strategy=strategy, seed=seed,
                    workload=replace(base.workload, pattern=pattern))
                samples.append(_run_metrics(run_simulation(cfg)))
            cells.append(_aggregate(strategy, pattern, samples))
    return cells


def run_sweep(base: SimConfig, windows: list[int], seeds: list[int]) -> list[dict]:
    """Window-length sweep; one row per window with seed-mean counters."""
    rows = []
    for w in windows:
        samples = []
        for seed in seeds:
            cfg = replace(base, window_len_steps=w, seed=seed)
            samples.append(_run_metrics(run_simulation(cfg)))
        row = {"window_len_steps": w, "seeds": len(seeds)}
        for m in COMPARE_METRICS:
            row[f"{m}_mean"] = statistics.fmean(s[m] for s in samples)
            row[f"{m}_std"] = (statistics.pstdev(s[m] for s in samples)
                               if len(samples) > 1 else 0.0)
        rows.append(row)
    return rows
