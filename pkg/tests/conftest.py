"""Shared fixtures: the built-in deck and a seeded random-layout fuzzer."""

import math
import random

import pytest

from evacsim.engine import SimConfig, init_trial, step
from evacsim.field import build_field
from evacsim.layout import LayoutError, generate_a380_upper_deck, parse_layout
from evacsim.stochastic import make_rng


@pytest.fixture(scope="session")
def a380():
    return generate_a380_upper_deck()


@pytest.fixture(scope="session")
def a380_field(a380):
    return build_field(a380)


def random_layout_text(rnd: random.Random, max_side=12):
    """One random small layout: bordered room, scattered walls and seats,
    a 2-wide exit punched into a random wall."""
    w = rnd.randint(5, max_side)
    h = rnd.randint(4, max_side)
    grid = [["." for _ in range(w)] for _ in range(h)]
    for x in range(w):
        grid[0][x] = grid[h - 1][x] = "#"
    for y in range(h):
        grid[y][0] = grid[y][w - 1] = "#"
    for _ in range(rnd.randint(0, w * h // 6)):
        x, y = rnd.randint(1, w - 2), rnd.randint(1, h - 2)
        grid[y][x] = "#"
    for _ in range(rnd.randint(1, max(1, (w * h) // 8))):
        x, y = rnd.randint(1, w - 2), rnd.randint(1, h - 2)
        if grid[y][x] == ".":
            grid[y][x] = "S"
    n_exits = rnd.choice((1, 1, 2))
    for _ in range(n_exits):
        side = rnd.choice(("top", "bottom", "left", "right"))
        if side in ("top", "bottom"):
            x = rnd.randint(1, w - 3)
            y = 0 if side == "top" else h - 1
            grid[y][x] = grid[y][x + 1] = "E"
            # keep the doorway approach clear
            iy = 1 if side == "top" else h - 2
            grid[iy][x] = grid[iy][x + 1] = "."
        else:
            y = rnd.randint(1, h - 3)
            x = 0 if side == "left" else w - 1
            grid[y][x] = grid[y + 1][x] = "E"
            ix = 1 if side == "left" else w - 2
            grid[y][ix] = grid[y + 1][ix] = "."
    return "\n".join("".join(row) for row in grid)


def make_fuzz_layouts(count, seed=2024, max_side=12):
    """Deterministic list of ``count`` valid random layouts with >= 1 seat."""
    rnd = random.Random(seed)
    layouts = []
    attempts = 0
    while len(layouts) < count:
        attempts += 1
        assert attempts < count * 200, "fuzz layout generation stalled"
        try:
            lay = parse_layout(random_layout_text(rnd, max_side))
        except LayoutError:
            continue
        if lay.seat_count() == 0:
            continue
        layouts.append(lay)
    return layouts


class InvariantChecker:
    """Per-tick engine invariant assertions, used as a run_trial observer."""

    def __init__(self, layout, config):
        self.layout = layout
        self.config = config
        self.prev = None
        self.max_step_m = config.speed_cap * config.tick_length
        self.ticks_seen = 0

    def __call__(self, state):
        lay = self.layout
        agents = state.agents()
        # one agent per patch, on walkable patches only
        patches = [a.patch for a in agents]
        assert len(set(patches)) == len(patches), "two agents share a patch"
        for a in agents:
            assert lay.walkable_at(*a.patch), f"agent {a.id} on non-walkable patch"
            assert 0.0 <= a.speed <= a.max_speed + 1e-12
            assert 0.3 - 1e-12 <= a.max_speed <= 1.05 + 1e-12
        # occupancy map matches agent positions
        occ = state.occupancy()
        assert sorted(occ.values()) == sorted(a.id for a in agents)
        # conservation
        assert len(agents) + len(state.exited) == state.initial_count
        # no exits before the doors open
        for rec in state.exited:
            assert rec.t_s >= self.config.exit_opening_time - 1e-9
        # per-tick displacement bound
        if self.prev is not None:
            for a in agents:
                if a.id in self.prev:
                    px, py = self.prev[a.id]
                    d = math.hypot(a.x - px, a.y - py) * self.config.patch_size
                    assert d <= self.max_step_m + 1e-9, f"agent {a.id} moved {d} m"
        self.prev = {a.id: (a.x, a.y) for a in agents}
        self.ticks_seen += 1


def run_checked_trial(layout, config, seed):
    """run_trial with the invariant observer attached; returns the result."""
    from evacsim.engine import run_trial
    field = build_field(layout)
    checker = InvariantChecker(layout, config)
    result = run_trial(layout, field, config, seed, observer=checker)
    assert checker.ticks_seen == result.ticks + 1
    return result
