"""Per-tick evacuation engine.

Each 0.1 s tick processes exits first (door-delay countdown and removal once
the doors have been open for the configured opening time), then moves every
agent once in a freshly shuffled order. Positions are continuous; occupancy
is one agent per patch, claimed and released as patch boundaries are crossed.

Internally agents live in grid coordinates (column, row); world coordinates
appear only in snapshots, traces and results.
"""

import math
from dataclasses import dataclass, replace

from .field import FloorField, UNWALKABLE, _MOORE
from .layout import CabinLayout, PatchKind, WALKABLE_KINDS
from .stochastic import (AttributeDistributions, RngState, make_rng,
                         sample_door_delay, sample_max_speed, shuffle_order)

COMPLETED = "Completed"
TIMEOUT = "Timeout"

# keeps a clamped agent strictly inside its patch (half a micrometre; far
# below any physically meaningful distance, but coarse enough to survive
# the 8-decimal rounding used in traces)
_BOUNDARY_INSET = 1e-6


@dataclass(frozen=True)
class SimConfig:
    """All simulation tunables.

    acceleration/deceleration are m/s per tick. Together with speed_lambda
    they were calibrated once so the zero-delay run on the built-in deck
    averages near 58 s, and are not meant to vary between experiments;
    mean_door_delay is the experimental variable.
    """

    mean_door_delay: float = 0.0
    exit_opening_time: float = 14.0
    tick_length: float = 0.1
    acceleration: float = 0.4
    deceleration: float = 0.005
    patch_size: float = 0.5
    max_sim_time: float = 600.0
    speed_floor: float = 0.3
    speed_cap: float = 1.05
    speed_step: float = 0.05
    speed_lambda: float = 17.0

    def __post_init__(self):
        if self.mean_door_delay < 0:
            raise ValueError("mean_door_delay must be >= 0")
        for name in ("exit_opening_time", "tick_length", "acceleration",
                     "deceleration", "patch_size", "max_sim_time"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")

    def distributions(self) -> AttributeDistributions:
        return AttributeDistributions(
            mean_door_delay=self.mean_door_delay,
            speed_floor=self.speed_floor,
            speed_cap=self.speed_cap,
            speed_step=self.speed_step,
            speed_lambda=self.speed_lambda,
        )

    def with_mean_door_delay(self, d: float) -> "SimConfig":
        return replace(self, mean_door_delay=d)

    @property
    def door_open_tick(self) -> int:
        """First tick index T with T * tick_length >= exit_opening_time."""
        return math.ceil(self.exit_opening_time / self.tick_length - 1e-9)


@dataclass(frozen=True)
class Agent:
    """Read-only snapshot of one passenger (world coordinates)."""

    id: int
    x: float
    y: float
    heading: float  # degrees; 0 = port (+y), 90 = front (+x)
    speed: float
    max_speed: float
    door_delay_s: float

    @property
    def patch(self):
        return (math.floor(self.x + 0.5), math.floor(self.y + 0.5))


@dataclass(frozen=True)
class ExitRecord:
    agent_id: int
    exit_name: str
    t_s: float


@dataclass(frozen=True)
class TrialResult:
    evac_time_s: float
    outcome: str  # COMPLETED or TIMEOUT
    records: tuple  # ExitRecord per exited agent, in removal order
    seed: int
    ticks: int
    initial_count: int


class SimState:
    """Mutable trial state. Owned by exactly one trial; layout and field are
    shared read-only."""

    def __init__(self, layout: CabinLayout, field: FloorField, config: SimConfig):
        self.layout = layout
        self.field = field
        self.config = config
        self.tick = 0
        W, H = layout.width, layout.height
        self._w = W
        self._h = H
        self._kind = [int(k) for k in layout.patches]
        self._walk = [k in WALKABLE_KINDS for k in layout.patches]
        self._occ = [0] * (W * H)
        self._climb = _build_climb_table(layout, field)
        self._exit_name = _exit_name_map(layout)
        # agent state-of-arrays, indexed by agent id
        self._xs = []
        self._ys = []
        self._pxs = []
        self._pys = []
        self._hxs = []
        self._hys = []
        self._spd = []
        self._max = []
        self._delay = []   # remaining door delay in ticks
        self._hvalid = []  # heading already computed for current position
        self._active = []  # ascending agent ids
        self.exited = []   # ExitRecord, in removal order

    # -- inspection helpers (not used on the hot path) ----------------------

    @property
    def initial_count(self):
        return len(self._xs)

    @property
    def active_count(self):
        return len(self._active)

    def active_ids(self):
        return list(self._active)

    def elapsed_s(self):
        return self.tick * self.config.tick_length

    def agent(self, i: int) -> Agent:
        lay = self.layout
        hx, hy = self._hxs[i], self._hys[i]
        heading = math.degrees(math.atan2(hx, -hy)) % 360.0
        return Agent(
            id=i,
            x=lay.x_min + self._xs[i],
            y=lay.y_max - self._ys[i],
            heading=heading,
            speed=self._spd[i],
            max_speed=self._max[i],
            door_delay_s=self._delay[i] * self.config.tick_length,
        )

    def agents(self):
        return [self.agent(i) for i in self._active]

    def occupancy(self):
        """World (x, y) -> agent id for every occupied patch."""
        lay = self.layout
        out = {}
        for idx, v in enumerate(self._occ):
            if v:
                r, c = divmod(idx, self._w)
                out[(lay.x_min + c, lay.y_max - r)] = v - 1
        return out


def _build_climb_table(layout: CabinLayout, field: FloorField):
    """For each walkable patch: the centers (grid coords) of its
    max-intensity strictly-higher walkable Moore neighbors, or None."""
    W, H = layout.width, layout.height
    inten = field.intensity
    walk = [k in WALKABLE_KINDS for k in layout.patches]
    table = [None] * (W * H)
    for r in range(H):
        for c in range(W):
            i = r * W + c
            if not walk[i]:
                continue
            here = inten[i]
            best = here
            cands = []
            for dr, dc in _MOORE:
                nr, nc = r + dr, c + dc
                if 0 <= nr < H and 0 <= nc < W:
                    j = nr * W + nc
                    if walk[j] and inten[j] > best:
                        best = inten[j]
                        cands = [(float(nc), float(nr))]
                    elif walk[j] and inten[j] == best and best > here:
                        cands.append((float(nc), float(nr)))
            table[i] = tuple(cands) if cands else None
    return table


def _exit_name_map(layout: CabinLayout):
    names = {}
    for g in layout.exits:
        if g.is_open:
            for (x, y) in g.cells:
                names[layout.row(y) * layout.width + layout.col(x)] = g.name
    return names


def init_trial(layout: CabinLayout, field: FloorField, config: SimConfig,
               rng: RngState) -> SimState:
    """One agent per seat patch, at the patch center, heading 90 (front),
    speed 0. Door delay and max speed are drawn per agent in ascending id
    order (delay first), which pins the generator call sequence."""
    state = SimState(layout, field, config)
    dist = config.distributions()
    tick = config.tick_length
    for i, (x, y) in enumerate(layout.seat_cells()):
        c = layout.col(x)
        r = layout.row(y)
        d_s = sample_door_delay(dist, rng)
        m = sample_max_speed(dist, rng)
        state._xs.append(float(c))
        state._ys.append(float(r))
        state._pxs.append(c)
        state._pys.append(r)
        state._hxs.append(1.0)  # heading 90: toward the front (+x)
        state._hys.append(0.0)
        state._spd.append(0.0)
        state._max.append(m)
        state._delay.append(round(d_s / tick))
        state._hvalid.append(False)
        state._active.append(i)
        state._occ[r * state._w + c] = i + 1
    return state


def _boundary_t(x, y, px, py, hx, hy):
    """Ray parameter to the first crossing of the current patch's border."""
    if hx > 1e-15:
        tx = (px + 0.5 - x) / hx
    elif hx < -1e-15:
        tx = (px - 0.5 - x) / hx
    else:
        tx = math.inf
    if hy > 1e-15:
        ty = (py + 0.5 - y) / hy
    elif hy < -1e-15:
        ty = (py - 0.5 - y) / hy
    else:
        ty = math.inf
    return tx if tx < ty else ty


def _move_one(i, kind, walk, occ, climb, xs, ys, pxs, pys, hxs, hys, spd, mx,
              hvalid, W, H, accel, decel, s2g):
    """Move one agent: climb-gradient heading update, then advance.

    Returns nothing; mutates the state arrays. An agent standing on an open
    exit patch is skipped by the caller (terminal wait).
    """
    x = xs[i]
    y = ys[i]
    px = pxs[i]
    py = pys[i]

    # (a) heading: toward the highest-intensity strictly-higher neighbor.
    # Pure function of position, so skip when the agent has not moved.
    cands = climb[py * W + px]
    if cands is not None and not hvalid[i]:
        if len(cands) == 1:
            tx, ty = cands[0]
            vx = tx - x
            vy = ty - y
            inv = 1.0 / math.sqrt(vx * vx + vy * vy)
            hx = vx * inv
            hy = vy * inv
        else:
            # tie on intensity: smallest absolute turn, then clockwise first
            chx = hxs[i]
            chy = hys[i]
            best_dot = -2.0
            best_cross = math.inf
            hx = chx
            hy = chy
            for tx, ty in cands:
                vx = tx - x
                vy = ty - y
                inv = 1.0 / math.sqrt(vx * vx + vy * vy)
                ux = vx * inv
                uy = vy * inv
                dot = chx * ux + chy * uy
                cross = chy * ux - chx * uy  # < 0 means clockwise of h_i
                if dot > best_dot or (dot == best_dot and cross < best_cross):
                    best_dot = dot
                    best_cross = cross
                    hx = ux
                    hy = uy
        hxs[i] = hx
        hys[i] = hy
        hvalid[i] = True
    else:
        hx = hxs[i]
        hy = hys[i]

    # (b) the patch one full patch-length ahead along the heading
    ax = math.floor(x + hx + 0.5)
    ay = math.floor(y + hy + 0.5)
    occupant = 0
    if 0 <= ax < W and 0 <= ay < H and not (ax == px and ay == py):
        occupant = occ[ay * W + ax]

    if occupant:
        # (c) follow: match the blocker's speed, decelerate, never enter
        s = spd[occupant - 1]
        si = spd[i]
        if si < s:
            s = si
        s -= decel
        if s < 0.0:
            s = 0.0
        spd[i] = s
        if s > 0.0:
            t = _boundary_t(x, y, px, py, hx, hy) - _BOUNDARY_INSET
            if t < 0.0:
                t = 0.0
            d = s * s2g
            if d < t:
                t = d
            if t > 0.0:
                xs[i] = x + hx * t
                ys[i] = y + hy * t
                hvalid[i] = False
        return

    # (d) free (or facing a wall): accelerate and advance. Entering an
    # occupied patch stops the agent at its patch boundary; hitting a wall
    # deflects the remaining motion along the wall (otherwise an agent aimed
    # at a doorway diagonal across a wall corner would wedge there forever).
    s = spd[i] + accel
    m = mx[i]
    if s > m:
        s = m
    spd[i] = s
    d = s * s2g
    nx = x + hx * d
    ny = y + hy * d
    npx = math.floor(nx + 0.5)
    npy = math.floor(ny + 0.5)
    if npx == px and npy == py:
        xs[i] = nx
        ys[i] = ny
        hvalid[i] = False
        return
    inb = 0 <= npx < W and 0 <= npy < H
    if inb:
        nidx = npy * W + npx
        if walk[nidx]:
            if not occ[nidx]:
                occ[nidx] = i + 1
                occ[py * W + px] = 0
                pxs[i] = npx
                pys[i] = npy
                xs[i] = nx
                ys[i] = ny
                hvalid[i] = False
                return
            # claimed by another agent: wait at the boundary
            t = _boundary_t(x, y, px, py, hx, hy) - _BOUNDARY_INSET
            if t < 0.0:
                t = 0.0
            xs[i] = x + hx * t
            ys[i] = y + hy * t
            spd[i] = 0.0
            hvalid[i] = False
            return

    # wall contact: advance to the wall, then slide the projected remainder
    # of the motion along the open axis
    if hx > 1e-15:
        tbx = (px + 0.5 - x) / hx
    elif hx < -1e-15:
        tbx = (px - 0.5 - x) / hx
    else:
        tbx = math.inf
    if hy > 1e-15:
        tby = (py + 0.5 - y) / hy
    elif hy < -1e-15:
        tby = (py - 0.5 - y) / hy
    else:
        tby = math.inf
    t = (tbx if tbx < tby else tby) - _BOUNDARY_INSET
    if t < 0.0:
        t = 0.0
    elif t > d:
        t = d
    bx = x + hx * t
    by = y + hy * t
    rem = d - t
    slid = False
    if tbx <= tby:
        # blocked across the x boundary; slide in y
        sd = rem * (hy if hy >= 0.0 else -hy)
        if sd > 0.0:
            sy = by + (sd if hy >= 0.0 else -sd)
            spy = math.floor(sy + 0.5)
            if spy == py:
                slid = True
            elif 0 <= spy < H and walk[spy * W + px] and not occ[spy * W + px]:
                occ[spy * W + px] = i + 1
                occ[py * W + px] = 0
                pys[i] = spy
                slid = True
            if slid:
                by = sy
    else:
        sd = rem * (hx if hx >= 0.0 else -hx)
        if sd > 0.0:
            sx = bx + (sd if hx >= 0.0 else -sd)
            spx = math.floor(sx + 0.5)
            if spx == px:
                slid = True
            elif 0 <= spx < W and walk[py * W + spx] and not occ[py * W + spx]:
                occ[py * W + spx] = i + 1
                occ[py * W + px] = 0
                pxs[i] = spx
                slid = True
            if slid:
                bx = sx
    xs[i] = bx
    ys[i] = by
    if not slid:
        spd[i] = 0.0
    hvalid[i] = False


def step(state: SimState, config: SimConfig, rng: RngState) -> SimState:
    """Advance one tick: exit processing, then shuffled movement."""
    T = state.tick
    W = state._w
    kind = state._kind
    occ = state._occ
    active = state._active
    tick_len = config.tick_length

    # phase 1: door-delay countdown once the doors have been open
    if active and T >= config.door_open_tick:
        delay = state._delay
        pxs = state._pxs
        pys = state._pys
        removed = None
        exit_open = int(PatchKind.EXIT_OPEN)
        for i in active:
            idx = pys[i] * W + pxs[i]
            if kind[idx] == exit_open:
                delay[i] -= 1
                if delay[i] <= 0:
                    occ[idx] = 0
                    name = state._exit_name.get(idx)
                    if name is None:
                        name = f"exit({state.layout.x_min + pxs[i]},{state.layout.y_max - pys[i]})"
                    state.exited.append(ExitRecord(i, name, (T + 1) * tick_len))
                    if removed is None:
                        removed = set()
                    removed.add(i)
        if removed:
            state._active = active = [i for i in active if i not in removed]

    # phase 2: move everyone once, in a fresh uniform order
    n = len(active)
    if n:
        walk = state._walk
        climb = state._climb
        xs = state._xs
        ys = state._ys
        pxs = state._pxs
        pys = state._pys
        hxs = state._hxs
        hys = state._hys
        spd = state._spd
        mx = state._max
        hvalid = state._hvalid
        H = state._h
        accel = config.acceleration
        decel = config.deceleration
        s2g = tick_len / config.patch_size
        exit_open = int(PatchKind.EXIT_OPEN)
        for j in shuffle_order(rng, n):
            i = active[j]
            if kind[pys[i] * W + pxs[i]] == exit_open:
                continue  # waiting out the door delay
            _move_one(i, kind, walk, occ, climb, xs, ys, pxs, pys, hxs, hys,
                      spd, mx, hvalid, W, H, accel, decel, s2g)

    state.tick = T + 1
    return state


def move_agent(agent_id: int, state: SimState, config: SimConfig = None) -> Agent:
    """Apply the movement rule to a single active agent and return its new
    snapshot. Agents standing on an open exit patch do not move."""
    cfg = config or state.config
    i = agent_id
    if state._kind[state._pys[i] * state._w + state._pxs[i]] != int(PatchKind.EXIT_OPEN):
        _move_one(i, state._kind, state._walk, state._occ, state._climb,
                  state._xs, state._ys, state._pxs, state._pys,
                  state._hxs, state._hys, state._spd, state._max,
                  state._hvalid, state._w, state._h,
                  cfg.acceleration, cfg.deceleration,
                  cfg.tick_length / cfg.patch_size)
    return state.agent(i)


def run_trial(layout: CabinLayout, field: FloorField, config: SimConfig,
              seed: int, observer=None) -> TrialResult:
    """Run one full trial to completion or timeout.

    Deterministic in (layout, config, seed). ``observer``, if given, is
    called with the state after initialisation (tick 0) and after every tick.
    """
    rng = make_rng(seed)
    state = init_trial(layout, field, config, rng)
    if observer is not None:
        observer(state)
    outcome = COMPLETED
    while state._active:
        if state.tick * config.tick_length >= config.max_sim_time:
            outcome = TIMEOUT
            break
        step(state, config, rng)
        if observer is not None:
            observer(state)
    evac = state.exited[-1].t_s if state.exited else 0.0
    return TrialResult(
        evac_time_s=evac,
        outcome=outcome,
        records=tuple(state.exited),
        seed=seed,
        ticks=state.tick,
        initial_count=state.initial_count,
    )
