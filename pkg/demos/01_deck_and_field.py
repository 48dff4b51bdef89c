"""The built-in wide-body upper deck and its exit-proximity field.

Generates the 66x11 deck at full capacity (199 seats), blocks half the
doors the way a certification scenario does, and shades every walkable
patch by how close it is to the nearest usable door.
"""

from evacsim import PatchKind, build_field, generate_a380_upper_deck
from evacsim.layout import ExitSelection, serialize_layout

# ---------------------------------------------------------------------------
# The deck. Front of the aircraft is to the right, port side on top.
# Default blocking: front and rear port doors, middle starboard door.
# ---------------------------------------------------------------------------
deck = generate_a380_upper_deck()
print(f"deck: {deck.width}x{deck.height} patches, {deck.seat_count()} seats")
for g in deck.exits:
    state = "open" if g.is_open else "blocked"
    print(f"  {g.name:<12} at x={g.cells[0][0]}..{g.cells[1][0]}  [{state}]")
print()
print(serialize_layout(deck))

# ---------------------------------------------------------------------------
# The floor field: a multi-source BFS from the open doors over walkable
# patches (Moore adjacency). Agents steer toward whichever neighbouring
# patch carries the highest intensity.
# ---------------------------------------------------------------------------
field = build_field(deck)
print(f"farthest walkable patch is {field.max_distance} steps from a door\n")

SHADES = " .:-=+*#%@"  # dim = far from a door, bright = next to one
rows = []
for r in range(deck.height):
    row = ""
    for c in range(deck.width):
        d = field.dist[r * deck.width + c]
        if d < 0:
            row += "#" if deck.patches[r * deck.width + c] is not PatchKind.EXIT_BLOCKED else "X"
        else:
            level = 1 + (field.max_distance - d) * (len(SHADES) - 2) // max(1, field.max_distance)
            row += SHADES[level]
    rows.append(row)
print("\n".join(rows))

# An alternative scenario: block only the middle doors on both sides.
alt = generate_a380_upper_deck(ExitSelection(frozenset({"port-mid", "stbd-mid"})))
alt_field = build_field(alt)
print(f"\nwith the mid doors blocked instead, the farthest patch is "
      f"{alt_field.max_distance} steps out")
