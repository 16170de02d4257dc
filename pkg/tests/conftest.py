"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from cfcoef import ChannelInstance, ScaledChannel, svp_box_bound


def make_channel(rng: np.random.Generator, n: int, P: float) -> ChannelInstance:
    return ChannelInstance(h=rng.standard_normal(n), P=P)


def feasible_instance(
    rng: np.random.Generator,
    n: int,
    P: float,
    max_points: int = 2_000_000,
    attempts: int = 2000,
):
    """Random channel whose brute-force box stays small enough to enumerate.

    Rejection-samples the channel; correctness checks only need diverse
    valid instances, so the induced bias toward smaller channel norms at
    high SNR is harmless.
    """
    for _ in range(attempts):
        ch = make_channel(rng, n, P)
        sc = ScaledChannel.from_channel(ch)
        B = svp_box_bound(sc.t)
        if B <= 50 and (2 * B + 1) ** n <= max_points:
            return ch, sc
    raise RuntimeError(f"no enumerable instance found for n={n}, P={P}")


def same_up_to_sign(a, b) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    return bool(np.array_equal(a, b) or np.array_equal(a, -b))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
