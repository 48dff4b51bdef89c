"""Anatomy of a single evacuation trial.

Runs one seeded trial on the built-in deck and narrates it: nothing leaves
before the doors open at 14 s, then the three usable doors drain the cabin
in parallel, each limited by how fast the queue behind it can re-feed the
door sill.
"""

from collections import defaultdict

from evacsim import SimConfig, build_field, generate_a380_upper_deck, run_trial

deck = generate_a380_upper_deck()
field = build_field(deck)
config = SimConfig(mean_door_delay=0.5)

snapshots = {}


def watch(state):
    # keep a few mid-trial frames for the occupancy picture below
    if state.tick in (0, 150, 300):
        snapshots[state.tick] = state.occupancy()


result = run_trial(deck, field, config, seed=2024, observer=watch)
print(f"outcome={result.outcome}  evac_time={result.evac_time_s:.1f}s  "
      f"ticks={result.ticks}  passengers={result.initial_count}")

# ---------------------------------------------------------------------------
# Exits over time, in 5-second buckets.
# ---------------------------------------------------------------------------
buckets = defaultdict(int)
for rec in result.records:
    buckets[int(rec.t_s // 5) * 5] += 1
print("\nexits per 5 s window:")
for t0 in sorted(buckets):
    print(f"  {t0:>3}-{t0 + 5:<3}s  {'#' * buckets[t0]} {buckets[t0]}")

per_door = defaultdict(list)
for rec in result.records:
    per_door[rec.exit_name].append(rec.t_s)
print("\nper-door totals:")
for name, ts in sorted(per_door.items()):
    print(f"  {name:<12} {len(ts):>3} passengers, first {ts[0]:.1f}s, last {ts[-1]:.1f}s")

# ---------------------------------------------------------------------------
# Where everyone was mid-trial. Doors appear as gaps in the wall rows.
# ---------------------------------------------------------------------------
for tick, occupancy in sorted(snapshots.items()):
    print(f"\nt = {tick / 10:.0f}s  ({len(occupancy)} still aboard)")
    for y in range(deck.y_max, deck.y_min - 1, -1):
        row = ""
        for x in range(deck.x_min, deck.x_max + 1):
            if (x, y) in occupancy:
                row += "o"
            else:
                row += "." if deck.walkable_at(x, y) else " "
        print("  " + row)
