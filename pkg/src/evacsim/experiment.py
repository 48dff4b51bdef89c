"""Monte Carlo batches over trials, the door-delay sweep, and summary
statistics.

Trial i of a batch always runs with seed split_seed(base_seed, i), so
results are identical whatever the execution order or number of worker
processes.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .engine import SimConfig, TrialResult, TIMEOUT, run_trial
from .field import build_field
from .layout import CabinLayout
from .stochastic import split_seed


class EmptyInput(ValueError):
    pass


class BadRange(ValueError):
    pass


@dataclass(frozen=True)
class Stats:
    """Evacuation-time statistics of one batch. Timed-out trials are counted
    but excluded from the time figures."""

    n: int
    mean: float
    std_dev: float
    min: float
    max: float
    timeouts: int = 0


@dataclass(frozen=True)
class SweepPoint:
    mean_door_delay: float
    stats: Stats


def summarize(evac_times, timeouts: int = 0) -> Stats:
    """Exact mean / sample std (n-1) / min / max. A singleton gets std 0."""
    times = list(evac_times)
    if not times:
        raise EmptyInput("no completed trials to summarize")
    n = len(times)
    mean = math.fsum(times) / n
    if n > 1:
        var = math.fsum((t - mean) ** 2 for t in times) / (n - 1)
        std = math.sqrt(var)
    else:
        std = 0.0
    return Stats(n=n + timeouts, mean=mean, std_dev=std,
                 min=min(times), max=max(times), timeouts=timeouts)


def _run_chunk(layout, config, seed_pairs):
    field = build_field(layout)
    return [(i, run_trial(layout, field, config, seed)) for i, seed in seed_pairs]


def run_batch(layout: CabinLayout, config: SimConfig, trials: int,
              base_seed: int, jobs: int = 1):
    """Run ``trials`` independent trials; returns (Stats, [TrialResult]).

    The result list is ordered by trial index and identical for any ``jobs``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seed_pairs = [(i, split_seed(base_seed, i)) for i in range(trials)]

    results: list = [None] * trials
    if jobs <= 1 or trials == 1:
        field = build_field(layout)
        for i, seed in seed_pairs:
            results[i] = run_trial(layout, field, config, seed)
    else:
        jobs = min(jobs, trials)
        chunks = [seed_pairs[j::jobs] for j in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for done in pool.map(_run_chunk, [layout] * jobs, [config] * jobs, chunks):
                for i, res in done:
                    results[i] = res

    times = [r.evac_time_s for r in results if r.outcome != TIMEOUT]
    timeouts = sum(1 for r in results if r.outcome == TIMEOUT)
    return summarize(times, timeouts), results


def sweep(layout: CabinLayout, config: SimConfig, d_from: float, d_to: float,
          d_step: float, trials: int, base_seed: int, jobs: int = 1):
    """One batch per door-delay value d_from, d_from+d_step, ... <= d_to.

    The grid is generated by integer index to avoid float accumulation, with
    a d_step/1000 tolerance so the endpoint is included. Each point's batch
    seeds derive from the base seed mixed with the point index.
    """
    if d_step <= 0:
        raise BadRange("d_step must be > 0")
    if d_from > d_to:
        raise BadRange("d_from must be <= d_to")
    eps = d_step / 1000.0
    points = []
    k = 0
    while True:
        d = d_from + k * d_step
        if d > d_to + eps:
            break
        stats, _ = run_batch(layout, config.with_mean_door_delay(d), trials,
                             split_seed(base_seed, k), jobs=jobs)
        points.append(SweepPoint(mean_door_delay=d, stats=stats))
        k += 1
    return points


def threshold_crossing(points, threshold: float):
    """Smallest door delay whose mean evacuation time exceeds the threshold,
    or None. ``points`` must be sorted by door delay."""
    for p in points:
        if p.stats.mean > threshold:
            return p.mean_door_delay
    return None
