"""Exit-proximity intensity field.

Each walkable patch gets an integer intensity that strictly decreases with
Moore-adjacency BFS distance from the nearest open exit; agents navigate by
climbing it. Unwalkable patches carry the UNWALKABLE sentinel.
"""

from collections import deque
from dataclasses import dataclass

from .layout import CabinLayout, UnreachablePatch, WALKABLE_KINDS, PatchKind

UNWALKABLE = -1

_MOORE = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


class OutOfBounds(IndexError):
    pass


@dataclass(frozen=True)
class FloorField:
    """Per-patch distance and intensity, row-major like the layout grid.

    intensity = max_distance + 1 - dist on walkable patches, so open exits
    carry the maximum and every step down the BFS tree loses exactly 1.
    """

    layout: CabinLayout
    dist: tuple  # BFS steps to nearest open exit; UNWALKABLE on walls
    intensity: tuple
    max_distance: int

    def intensity_at(self, x, y):
        if not self.layout.in_bounds(x, y):
            raise OutOfBounds(f"({x},{y}) outside grid")
        return self.intensity[self.layout.row(y) * self.layout.width + self.layout.col(x)]

    def dist_at(self, x, y):
        if not self.layout.in_bounds(x, y):
            raise OutOfBounds(f"({x},{y}) outside grid")
        return self.dist[self.layout.row(y) * self.layout.width + self.layout.col(x)]

    def to_csv(self) -> str:
        """Debug dump: one `x,y,dist,intensity` line per walkable patch."""
        lines = ["x,y,dist,intensity"]
        lay = self.layout
        for r in range(lay.height):
            for c in range(lay.width):
                i = r * lay.width + c
                if self.dist[i] != UNWALKABLE:
                    lines.append(f"{lay.x_min + c},{lay.y_max - r},{self.dist[i]},{self.intensity[i]}")
        return "\n".join(lines) + "\n"


def build_field(layout: CabinLayout, overrides=None) -> FloorField:
    """Multi-source BFS from all open-exit patches over walkable patches.

    ``overrides`` optionally maps world (x, y) -> intensity, applied after the
    BFS; it exists to emulate crew guidance signals and is unused by default.
    Overridden values are the caller's responsibility and may break the
    no-local-maxima property.
    """
    W, H = layout.width, layout.height
    patches = layout.patches
    dist = [UNWALKABLE] * (W * H)
    q = deque()
    for i, k in enumerate(patches):
        if k is PatchKind.EXIT_OPEN:
            dist[i] = 0
            q.append(i)
    while q:
        i = q.popleft()
        r, c = divmod(i, W)
        d1 = dist[i] + 1
        for dr, dc in _MOORE:
            nr, nc = r + dr, c + dc
            if 0 <= nr < H and 0 <= nc < W:
                j = nr * W + nc
                if dist[j] == UNWALKABLE and patches[j] in WALKABLE_KINDS:
                    dist[j] = d1
                    q.append(j)

    max_d = 0
    for i, k in enumerate(patches):
        if k in WALKABLE_KINDS:
            if dist[i] == UNWALKABLE:
                r, c = divmod(i, W)
                raise UnreachablePatch(
                    f"walkable patch at row {r}, column {c} unreachable from any open exit")
            if dist[i] > max_d:
                max_d = dist[i]

    intensity = [UNWALKABLE if d == UNWALKABLE else max_d + 1 - d for d in dist]
    if overrides:
        for (x, y), v in overrides.items():
            if not layout.in_bounds(x, y):
                raise OutOfBounds(f"override ({x},{y}) outside grid")
            intensity[layout.row(y) * W + layout.col(x)] = v
    return FloorField(layout, tuple(dist), tuple(intensity), max_d)


def intensity_at(f: FloorField, x, y):
    return f.intensity_at(x, y)
