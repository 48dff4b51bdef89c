"""Seeded randomness: trial RNGs, per-trial seed derivation, and the two
passenger attribute distributions (door delay, maximum walking speed).

Everything here is deterministic given the seed; batches derive one
independent seed per trial with split_seed so results never depend on
execution order.
"""

from dataclasses import dataclass

import numpy as np

RngState = np.random.Generator

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class LambdaOutOfRange(ValueError):
    pass


def make_rng(seed: int) -> RngState:
    """Deterministic generator from a 64-bit seed (PCG64)."""
    return np.random.Generator(np.random.PCG64(seed & _MASK64))


def split_seed(base_seed: int, trial_index: int) -> int:
    """Derive the seed for one trial of a batch.

    SplitMix64 finalizer over base + index * golden-ratio increment: a
    bijection for fixed base, so distinct trial indices can never collide.
    """
    if trial_index < 0:
        raise ValueError("trial_index must be >= 0")
    z = (base_seed + trial_index * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def sample_poisson(lam: float, rng: RngState) -> int:
    """One Poisson(lam) draw. lam is capped at 100; every use in the
    simulator stays at or below 15."""
    if not 0.0 <= lam <= 100.0:
        raise LambdaOutOfRange(f"lambda {lam} outside [0, 100]")
    return int(rng.poisson(lam))


@dataclass(frozen=True)
class AttributeDistributions:
    """Passenger attribute distributions.

    Door delay is Poisson(10 * mean_door_delay) tenths of a second, so its
    mean is exactly the configured value on the 0.1 s tick grid. Maximum
    speed is speed_floor + speed_step * Poisson(speed_lambda), clamped to
    [speed_floor, speed_cap].
    """

    mean_door_delay: float = 0.0
    speed_floor: float = 0.3
    speed_cap: float = 1.05
    speed_step: float = 0.05
    speed_lambda: float = 7.5

    def __post_init__(self):
        if self.mean_door_delay < 0:
            raise ValueError("mean door delay must be >= 0")
        if not 0 < self.speed_floor <= self.speed_cap:
            raise ValueError("need 0 < speed_floor <= speed_cap")


def sample_door_delay(dist: AttributeDistributions, rng: RngState) -> float:
    """Seconds an agent spends on an exit patch before leaving; a
    non-negative multiple of 0.1 s with mean exactly mean_door_delay."""
    return sample_poisson(10.0 * dist.mean_door_delay, rng) / 10.0


def speed_from_count(dist: AttributeDistributions, k: int) -> float:
    s = dist.speed_floor + dist.speed_step * k
    return min(dist.speed_cap, max(dist.speed_floor, s))


def sample_max_speed(dist: AttributeDistributions, rng: RngState) -> float:
    """Maximum walking speed in m/s, always within [speed_floor, speed_cap]."""
    return speed_from_count(dist, sample_poisson(dist.speed_lambda, rng))


def shuffle_order(rng: RngState, n: int):
    """Uniform random visiting order for n agents as a list of indices.

    Fisher-Yates driven by one batch of n uniform floats, so each tick
    consumes a fixed, reproducible slice of the generator's stream.
    """
    order = list(range(n))
    if n < 2:
        return order
    rs = rng.random(n).tolist()
    for k in range(n - 1, 0, -1):
        j = int(rs[n - 1 - k] * (k + 1))
        order[k], order[j] = order[j], order[k]
    return order
