"""Closed-form Landau-Zener probability against the swept two-level integral."""

from __future__ import annotations

import time

import numpy as np
import pytest

from tbqudit.landau_zener import flip_probability, swept_two_level_flip_probability

SLOPE_DIFF = 2 * 6 * 1.5 * 13.996245e9  # Hz/T for the shipped g_J = 1.5 system


def test_limits() -> None:
    assert flip_probability(0.0, SLOPE_DIFF, 0.1) == 0.0
    assert flip_probability(2e4, SLOPE_DIFF, 0.0) == 1.0
    assert flip_probability(2e4, 0.0, 0.1) == 1.0
    assert flip_probability(2e4, SLOPE_DIFF, float("inf")) == 0.0


def test_monotonic_in_rate() -> None:
    rates = np.logspace(-3, 2, 30)
    probs = [flip_probability(2e4, SLOPE_DIFF, r) for r in rates]
    assert all(a > b for a, b in zip(probs, probs[1:]))


def test_reference_value_one_microkelvin_gap() -> None:
    # 1 uK * k_B/h = 20.836612 kHz gap swept at 0.1 T/s across a 251.9 GHz/T
    # slope difference: exponent pi^2 gap^2 / v = 0.1695, P = 0.1559.
    p = flip_probability(20836.612, SLOPE_DIFF, 0.1)
    assert abs(p - 0.156) < 2e-3


def test_invalid_inputs() -> None:
    with pytest.raises(ValueError):
        flip_probability(-1.0, SLOPE_DIFF, 0.1)
    with pytest.raises(ValueError):
        flip_probability(float("nan"), SLOPE_DIFF, 0.1)
    with pytest.raises(ValueError):
        swept_two_level_flip_probability(0.0, SLOPE_DIFF, 0.1)


@pytest.mark.parametrize("gap_Hz", [5e3, 20836.612, 1e5])
def test_closed_form_matches_sweep_integration(gap_Hz: float) -> None:
    t0 = time.perf_counter()
    closed = flip_probability(gap_Hz, SLOPE_DIFF, 0.1)
    numeric = swept_two_level_flip_probability(gap_Hz, SLOPE_DIFF, 0.1)
    assert abs(numeric - closed) < 0.02 * closed
    assert time.perf_counter() - t0 < 30.0
