"""Cabin layouts: the patch grid, exits, the text file format, and the
built-in wide-body upper deck used by the door-delay experiments.

A layout is a rectangular grid of 0.5 m x 0.5 m patches. World coordinates
put x toward the front of the aircraft (rightwards in the text format) and
y toward the port side (top row of the text format).
"""

from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum


class PatchKind(IntEnum):
    WALL = 0
    FLOOR = 1
    SEAT = 2
    EXIT_OPEN = 3
    EXIT_BLOCKED = 4


# ExitBlocked behaves exactly like Wall for movement and field building.
WALKABLE_KINDS = frozenset({PatchKind.FLOOR, PatchKind.SEAT, PatchKind.EXIT_OPEN})

GLYPH_TO_KIND = {
    "#": PatchKind.WALL,
    ".": PatchKind.FLOOR,
    "S": PatchKind.SEAT,
    "E": PatchKind.EXIT_OPEN,
    "X": PatchKind.EXIT_BLOCKED,
}
KIND_TO_GLYPH = {v: k for k, v in GLYPH_TO_KIND.items()}


class LayoutError(ValueError):
    """Base class for layout parsing/validation failures."""


class RaggedRows(LayoutError):
    pass


class UnknownGlyph(LayoutError):
    pass


class NoOpenExit(LayoutError):
    pass


class UnreachablePatch(LayoutError):
    pass


class BadExitWidth(LayoutError):
    pass


class InvalidExitName(LayoutError):
    pass


class AllExitsBlocked(LayoutError):
    pass


@dataclass(frozen=True)
class ExitGroup:
    """One door: a named group of exactly two adjacent exit patches."""

    name: str
    cells: tuple  # ((x, y), (x, y)) in world coordinates
    is_open: bool


@dataclass(frozen=True)
class ExitSelection:
    """Set of exit names to block off for a certification-style scenario."""

    blocked: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "blocked", frozenset(self.blocked))


# The scenario from the certification experiment: half the doors unusable.
DEFAULT_BLOCKED = ExitSelection(frozenset({"port-front", "port-rear", "stbd-mid"}))

A380_EXIT_NAMES = (
    "port-front", "port-mid", "port-rear",
    "stbd-front", "stbd-mid", "stbd-rear",
)


@dataclass(frozen=True)
class CabinLayout:
    """Immutable patch grid plus named exits.

    ``patches`` is row-major with row 0 the most-port row (largest y).
    World x of column c is ``x_min + c``; world y of row r is ``y_max - r``.
    """

    width: int
    height: int
    patches: tuple  # row-major tuple of PatchKind
    exits: tuple = ()  # tuple of ExitGroup, open and blocked
    x_min: int = 0
    y_min: int = 0
    name: str = ""

    @property
    def y_max(self):
        return self.y_min + self.height - 1

    @property
    def x_max(self):
        return self.x_min + self.width - 1

    def col(self, x):
        return x - self.x_min

    def row(self, y):
        return self.y_max - y

    def in_bounds(self, x, y):
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def kind_at(self, x, y) -> PatchKind:
        if not self.in_bounds(x, y):
            raise IndexError(f"patch ({x},{y}) outside grid")
        return self.patches[self.row(y) * self.width + self.col(x)]

    def walkable_at(self, x, y) -> bool:
        return self.kind_at(x, y) in WALKABLE_KINDS

    def seat_cells(self):
        """Seat patch coordinates in row-major (port-to-starboard) order."""
        out = []
        for r in range(self.height):
            for c in range(self.width):
                if self.patches[r * self.width + c] is PatchKind.SEAT:
                    out.append((self.x_min + c, self.y_max - r))
        return out

    def open_exits(self):
        return tuple(g for g in self.exits if g.is_open)

    def seat_count(self):
        return sum(1 for k in self.patches if k is PatchKind.SEAT)


def _group_exit_cells(width, height, patches, kind):
    """Connected components (orthogonal adjacency) of one exit kind,
    as lists of (col, row)."""
    seen = set()
    groups = []
    for r in range(height):
        for c in range(width):
            if patches[r * width + c] is not kind or (c, r) in seen:
                continue
            comp = []
            q = deque([(c, r)])
            seen.add((c, r))
            while q:
                cc, rr = q.popleft()
                comp.append((cc, rr))
                for dc, dr in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    nc, nr = cc + dc, rr + dr
                    if 0 <= nc < width and 0 <= nr < height and (nc, nr) not in seen \
                            and patches[nr * width + nc] is kind:
                        seen.add((nc, nr))
                        q.append((nc, nr))
            groups.append(comp)
    return groups


def _position_labels(n):
    if n == 1:
        return ["front"]
    if n == 2:
        return ["front", "rear"]
    if n == 3:
        return ["front", "mid", "rear"]
    return ["front"] + [f"mid{i}" for i in range(1, n - 1)] + ["rear"]


def _name_exit_groups(width, height, patches, x_min, y_min):
    """Auto-name all exit groups (open and blocked) by side and
    front-to-back position. Blocked groups take part so that blocking a
    door never renames the surviving ones."""
    y_max = y_min + height - 1
    tagged = []
    for kind, is_open in ((PatchKind.EXIT_OPEN, True), (PatchKind.EXIT_BLOCKED, False)):
        for comp in _group_exit_cells(width, height, patches, kind):
            if len(comp) != 2:
                raise BadExitWidth(
                    f"exit group at column {comp[0][0] + x_min} has {len(comp)} "
                    f"patches, expected exactly 2")
            cells = tuple(sorted((x_min + c, y_max - r) for c, r in comp))
            tagged.append((cells, is_open))

    named = []
    for side in ("port", "stbd"):
        if side == "port":
            side_groups = [g for g in tagged if sum(c[1] for c in g[0]) / 2 >= 0]
        else:
            side_groups = [g for g in tagged if sum(c[1] for c in g[0]) / 2 < 0]
        # front of aircraft = +x; frontmost door named first
        side_groups.sort(key=lambda g: (-max(c[0] for c in g[0]), -max(c[1] for c in g[0])))
        labels = _position_labels(len(side_groups))
        for (cells, is_open), label in zip(side_groups, labels):
            named.append(ExitGroup(f"{side}-{label}", cells, is_open))
    named.sort(key=lambda g: (not g.is_open, g.name))
    return tuple(named)


def _check_reachability(width, height, patches):
    """Every walkable patch must reach an open exit over Moore adjacency."""
    dist = [-1] * (width * height)
    q = deque()
    for i, k in enumerate(patches):
        if k is PatchKind.EXIT_OPEN:
            dist[i] = 0
            q.append(i)
    while q:
        i = q.popleft()
        r, c = divmod(i, width)
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                nr, nc = r + dr, c + dc
                if 0 <= nr < height and 0 <= nc < width:
                    j = nr * width + nc
                    if dist[j] < 0 and patches[j] in WALKABLE_KINDS:
                        dist[j] = dist[i] + 1
                        q.append(j)
    for i, k in enumerate(patches):
        if k in WALKABLE_KINDS and dist[i] < 0:
            r, c = divmod(i, width)
            raise UnreachablePatch(
                f"walkable patch at row {r}, column {c} cannot reach any open exit")


def layout_from_rows(rows, *, name="", x_min=None, y_min=None, validate=True):
    """Build a CabinLayout from glyph rows (top row = most-port row).

    With ``validate=False`` the exit-width, open-exit and reachability checks
    are skipped; useful for constructing deliberately odd grids in tests.
    """
    if not rows:
        raise LayoutError("layout has no grid rows")
    width = len(rows[0])
    height = len(rows)
    for r, line in enumerate(rows):
        if len(line) != width:
            raise RaggedRows(
                f"row {r + 1} has length {len(line)}, expected {width}")
    patches = []
    for r, line in enumerate(rows):
        for c, ch in enumerate(line):
            kind = GLYPH_TO_KIND.get(ch)
            if kind is None:
                raise UnknownGlyph(f"unknown glyph {ch!r} at row {r + 1}, column {c + 1}")
            patches.append(kind)
    patches = tuple(patches)

    # Centered origin: reproduces the -33..32 / -5..5 convention at 66x11.
    if x_min is None:
        x_min = -(width // 2)
    if y_min is None:
        y_min = -(height // 2)

    if validate:
        if not any(k is PatchKind.EXIT_OPEN for k in patches):
            raise NoOpenExit("layout has no open exit patches")
        _check_reachability(width, height, patches)
    exits = _name_exit_groups(width, height, patches, x_min, y_min) if validate else ()
    return CabinLayout(width, height, patches, exits, x_min, y_min, name)


def parse_layout(text: str) -> CabinLayout:
    """Parse the text layout format.

    Lines starting with ``!`` are metadata comments; only ``!name:`` is
    interpreted. All other lines are grid rows of equal length over the
    alphabet ``#`` wall, ``.`` floor, ``S`` seat, ``E`` open exit,
    ``X`` blocked exit.
    """
    if not text.strip():
        raise LayoutError("empty layout text")
    name = ""
    rows = []
    for line in text.splitlines():
        if line.startswith("!"):
            meta = line[1:].strip()
            if meta.startswith("name:"):
                name = meta[len("name:"):].strip()
            continue
        rows.append(line)
    while rows and rows[-1] == "":
        rows.pop()
    return layout_from_rows(rows, name=name)


def serialize_layout(layout: CabinLayout) -> str:
    """Render a layout back to text. parse(serialize(L)) == L for layouts
    produced by parse_layout or generate_a380_upper_deck."""
    lines = []
    if layout.name:
        lines.append(f"!name: {layout.name}")
    for r in range(layout.height):
        row = layout.patches[r * layout.width:(r + 1) * layout.width]
        lines.append("".join(KIND_TO_GLYPH[k] for k in row))
    return "\n".join(lines) + "\n"


# --- built-in deck -----------------------------------------------------------
#
# Approximation of a twin-aisle upper deck at full capacity (199 seats),
# 66x11 patches, three 2-patch-wide door pairs per side. Deterministic
# pattern, front of aircraft at high x:
#
#   rows (world y):  +5 wall/doors | +4 +3 seats | +2 aisle | +1 0 -1 seats
#                    | -2 aisle | -3 -4 seats | -5 wall/doors
#   columns: three all-floor clearance zones of 3 columns at the door pairs
#   (cols 0-2, 31-33, 63-65; doors in cols 1,2 / 32,33 / 64,65), remaining
#   columns alternate seat columns with impassable gap columns. 29 seat
#   columns x 7 abreast = 203; the rearmost column is trimmed by 4 (its
#   port-side seats become gaps) for exactly 199.

_A380_WIDTH = 66
_A380_HEIGHT = 11
_A380_CLEARANCE = (0, 1, 2, 31, 32, 33, 63, 64, 65)
_A380_EXIT_COLS = ((1, 2), (32, 33), (64, 65))
_A380_SEAT_ROWS = (1, 2, 4, 5, 6, 8, 9)  # grid rows; aisles are rows 3 and 7
_A380_TRIMMED_ROWS = (1, 2, 4, 5)  # dropped from the rearmost seat column


def _a380_seat_cols():
    cols = [c for c in range(3, 31) if (c - 3) % 2 == 0]
    cols += [c for c in range(34, 63) if (c - 34) % 2 == 0]
    return cols


def generate_a380_upper_deck(blocked: ExitSelection = DEFAULT_BLOCKED) -> CabinLayout:
    """Built-in 66x11 deck with 199 seats and six doors.

    ``blocked`` names doors to replace with blocked-exit patches; the default
    blocks the front and rear port doors and the middle starboard door.
    """
    bad = set(blocked.blocked) - set(A380_EXIT_NAMES)
    if bad:
        raise InvalidExitName(f"unknown exit name(s): {', '.join(sorted(bad))}")
    if set(blocked.blocked) == set(A380_EXIT_NAMES):
        raise AllExitsBlocked("at least one exit must stay open")

    W, H = _A380_WIDTH, _A380_HEIGHT
    grid = [[PatchKind.WALL] * W for _ in range(H)]
    for r in (3, 7):  # aisles
        for c in range(W):
            grid[r][c] = PatchKind.FLOOR
    for c in _A380_CLEARANCE:
        for r in range(1, H - 1):
            grid[r][c] = PatchKind.FLOOR
    seat_cols = _a380_seat_cols()
    for c in seat_cols:
        for r in _A380_SEAT_ROWS:
            grid[r][c] = PatchKind.SEAT
    for r in _A380_TRIMMED_ROWS:
        grid[r][seat_cols[0]] = PatchKind.WALL

    # door pairs in both wall rows; blocked ones become X patches
    for side, wall_row in (("port", 0), ("stbd", H - 1)):
        for (c0, c1), pos in zip(_A380_EXIT_COLS, ("rear", "mid", "front")):
            kind = PatchKind.EXIT_BLOCKED if f"{side}-{pos}" in blocked.blocked \
                else PatchKind.EXIT_OPEN
            grid[wall_row][c0] = kind
            grid[wall_row][c1] = kind

    patches = tuple(k for row in grid for k in row)
    if not any(k is PatchKind.EXIT_OPEN for k in patches):
        raise AllExitsBlocked("at least one exit must stay open")
    _check_reachability(W, H, patches)
    exits = _name_exit_groups(W, H, patches, -33, -5)
    return CabinLayout(W, H, patches, exits, -33, -5, "a380-upper")
