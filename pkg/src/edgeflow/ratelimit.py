"""Sliding-window token rate limiter, step-granular.

A window at step t covers the inclusive step range [t - W + 1, t]. Admission
is all-or-nothing: a request's full token demand fits in the remaining
window budget or the request is refused with no state change.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field


class TimeWentBackwards(RuntimeError):
    pass


class ZeroTokens(ValueError):
    pass


@dataclass
class WindowState:
    window_len_steps: int
    capacity_tokens: float          # math.inf models an unlimited endpoint
    ledger: deque = field(default_factory=deque)  # (step, tokens), steps non-decreasing
    _now: int = -1
    _used: float = 0.0

    def __post_init__(self) -> None:
        if self.window_len_steps < 1:
            raise ValueError("window length must be >= 1")
        if self.capacity_tokens <= 0:
            raise ValueError("window capacity must be > 0")

    def advance(self, now: int) -> None:
        """Expire ledger entries that fell out of the window ending at now."""
        if now < self._now:
            raise TimeWentBackwards(f"advance to {now} after {self._now}")
        self._now = now
        cutoff = now - self.window_len_steps + 1
        while self.ledger and self.ledger[0][0] < cutoff:
            _, tokens = self.ledger.popleft()
            self._used -= tokens

    def window_used(self) -> float:
        return self._used

    def available(self) -> float:
        return self.capacity_tokens - self._used

    def try_admit(self, now: int, tokens: float) -> bool:
        """Admit iff the demand fits; refusal leaves the ledger untouched."""
        if tokens <= 0:
            raise ZeroTokens("admission requires a positive token count")
        self.advance(now)
        if self._used + tokens > self.capacity_tokens:
            return False
        self.ledger.append((now, tokens))
        self._used += tokens
        return True


def unlimited_window() -> WindowState:
    return WindowState(window_len_steps=1, capacity_tokens=math.inf)
