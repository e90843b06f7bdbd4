import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeflow.ratelimit import (TimeWentBackwards, WindowState, ZeroTokens,
                                unlimited_window)


def test_expiry_on_advance():
    w = WindowState(2, 100)
    assert w.try_admit(0, 50)
    assert w.try_admit(1, 50)
    w.advance(2)
    assert list(w.ledger) == [(1, 50)]
    assert w.window_used() == 50


def test_advance_empty_ledger():
    w = WindowState(3, 100)
    w.advance(5)
    assert w.window_used() == 0


def test_advance_idempotent():
    w = WindowState(5, 100)
    w.try_admit(0, 30)
    w.advance(3)
    used = w.window_used()
    w.advance(3)
    assert w.window_used() == used


def test_time_went_backwards():
    w = WindowState(2, 100)
    w.advance(4)
    with pytest.raises(TimeWentBackwards):
        w.advance(3)


def test_window_used_sums_ledger():
    w = WindowState(5, 1000)
    w.try_admit(3, 100)
    w.try_admit(4, 200)
    assert w.window_used() == 300


def test_admit_refuse_sequence():
    w = WindowState(2, 100)
    assert w.try_admit(0, 50)
    assert w.try_admit(1, 50)
    assert not w.try_admit(1, 50)  # would reach 150
    assert w.window_used() == 100


def test_window_roll_reopens_capacity():
    # hand-traced T2-style roll: the step-0 admission expires at step 2
    w = WindowState(2, 100)
    assert w.try_admit(0, 50)
    assert w.try_admit(1, 50)
    assert not w.try_admit(1, 50)
    assert w.try_admit(2, 50)


def test_exact_fill_admitted():
    w = WindowState(2, 100)
    assert w.try_admit(0, 100)


def test_zero_tokens_rejected():
    w = WindowState(2, 100)
    with pytest.raises(ZeroTokens):
        w.try_admit(0, 0)


def test_unlimited_window_admits_everything():
    w = unlimited_window()
    assert all(w.try_admit(step, 10**9) for step in range(100))


def test_refusal_purity():
    w = WindowState(3, 100)
    w.try_admit(0, 80)
    before = (w.window_used(), list(w.ledger))
    assert not w.try_admit(1, 50)
    assert (w.window_used(), list(w.ledger)) == before


def test_recovery_after_quiet_window():
    w = WindowState(4, 100)
    w.try_admit(0, 100)
    w.advance(4)  # steps 1-4 quiet
    assert w.window_used() == 0


@settings(max_examples=200)
@given(st.data())
def test_safety_invariant_random_sequences(data):
    window = data.draw(st.integers(1, 6))
    capacity = data.draw(st.integers(1, 500))
    w = WindowState(window, capacity)
    admitted = []
    now = 0
    for _ in range(data.draw(st.integers(1, 60))):
        now += data.draw(st.integers(0, 3))
        tokens = data.draw(st.integers(1, 200))
        if w.try_admit(now, tokens):
            admitted.append((now, tokens))
        in_window = sum(t for s, t in admitted if s >= now - window + 1)
        assert in_window <= capacity
        assert w.window_used() == in_window


def test_safety_invariant_bulk_randomized():
    # flat randomized soak: >= 10,000 admission attempts
    rng = random.Random(2024)
    cases = 0
    for _ in range(250):
        window = rng.randint(1, 8)
        capacity = rng.randint(10, 1000)
        w = WindowState(window, capacity)
        admitted = []
        now = 0
        for _ in range(50):
            now += rng.randint(0, 2)
            tokens = rng.randint(1, 400)
            used_before = sum(t for s, t in admitted if s >= now - window + 1)
            ok = w.try_admit(now, tokens)
            if ok:
                admitted.append((now, tokens))
            else:
                assert w.window_used() == used_before  # refusal purity
            in_window = sum(t for s, t in admitted if s >= now - window + 1)
            assert in_window <= capacity
            assert w.window_used() == in_window
            cases += 1
        # W quiet steps drain the window completely
        w.advance(now + window)
        assert w.window_used() == 0
    assert cases >= 10_000


def _refusal_run_after_burst(window: int, per_step_capacity: int,
                             burst_requests: int, steps: int) -> int:
    """Max consecutive refusals: one-step burst then one request per step."""
    w = WindowState(window, per_step_capacity * window)
    longest = run = 0
    for step in range(steps):
        attempts = burst_requests if step == 0 else 1
        for _ in range(attempts):
            if w.try_admit(step, per_step_capacity):
                run = 0
            else:
                run += 1
                longest = max(longest, run)
    return longest


def test_smaller_windows_recover_no_slower():
    # capacity scales with W so per-step budget is constant
    for burst in (3, 5, 10, 20):
        runs = [_refusal_run_after_burst(w, 100, burst, 20) for w in (1, 2, 5)]
        assert runs == sorted(runs)
