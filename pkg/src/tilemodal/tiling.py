"""Wang tiles: match sets, grid verification, bounded rectangle solving,
periodic (torus) tilings, and the tile-set file format.

Grids use (col, row) coordinates with the origin at the bottom-left, matching
the first-quadrant orientation of the tiling problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from tilemodal.formula import IDENT_RE, RESERVED_WORDS


@dataclass(frozen=True)
class Tile:
    """Unit square with natural-number edge colours."""

    up: int
    down: int
    left: int
    right: int

    def __post_init__(self):
        for c in (self.up, self.down, self.left, self.right):
            if c < 0:
                raise ValueError("colours are naturals")


@dataclass(frozen=True)
class TileSet:
    names: tuple[str, ...]
    tiles: tuple[Tile, ...]

    def __post_init__(self):
        if not self.tiles:
            raise ValueError("tile sets must be nonempty")
        if len(self.names) != len(self.tiles):
            raise ValueError("one name per tile")
        if len(set(self.names)) != len(self.names):
            raise ValueError("tile names must be unique")

    def __len__(self) -> int:
        return len(self.tiles)


def matches(w: TileSet, t: int) -> tuple[frozenset[int], frozenset[int]]:
    """Indices of tiles matching tile t to the right and upward.

    Right matches share t's right colour as their left colour; up matches
    share t's up colour as their down colour.
    """
    tile = w.tiles[t]
    right_set = frozenset(i for i, s in enumerate(w.tiles) if s.left == tile.right)
    up_set = frozenset(i for i, s in enumerate(w.tiles) if s.down == tile.up)
    return right_set, up_set


@dataclass
class Grid:
    """Rectangular tile assignment; treat as immutable once built."""

    width: int
    height: int
    cells: dict[tuple[int, int], int]

    def __post_init__(self):
        self.cells = dict(self.cells)

    def tile_at(self, col: int, row: int) -> int:
        return self.cells[(col, row)]

    def complete(self) -> bool:
        return all(
            (c, r) in self.cells
            for c in range(self.width)
            for r in range(self.height)
        )


@dataclass(frozen=True)
class Mismatch:
    """Failed adjacency at (col, row): edge "horizontal" means the right/left
    colours of (col, row) and (col+1, row) differ, "vertical" the up/down
    colours of (col, row) and (col, row+1)."""

    col: int
    row: int
    edge: str


def verify_grid(w: TileSet, g: Grid) -> Mismatch | None:
    """None if every shared edge matches, else the least failing cell."""
    if not g.complete():
        raise ValueError("grid is incomplete")
    for col in range(g.width):
        for row in range(g.height):
            here = w.tiles[g.tile_at(col, row)]
            if col + 1 < g.width:
                if here.right != w.tiles[g.tile_at(col + 1, row)].left:
                    return Mismatch(col, row, "horizontal")
            if row + 1 < g.height:
                if here.up != w.tiles[g.tile_at(col, row + 1)].down:
                    return Mismatch(col, row, "vertical")
    return None


class SearchBudgetExceeded(RuntimeError):
    """The backtracking budget ran out before the search space was exhausted."""


#: Default cap on backtracking node visits for solve_rect / find_torus.
DEFAULT_BUDGET = 10_000_000


def solve_rect(w: TileSet, width: int, height: int,
               budget: int = DEFAULT_BUDGET) -> Grid | None:
    """Backtracking search for a width x height tiling.

    Fills column-major, bottom-up, checking the left and down neighbours at
    each placement and forward-pruning placements whose right or up colour no
    tile can continue. None means the search space was exhausted: no tiling
    of the rectangle exists. Running out of budget raises instead, so a None
    is always a proof.
    """
    if width < 1 or height < 1:
        raise ValueError("rectangle sides must be positive")
    order = [(c, r) for c in range(width) for r in range(height)]
    left_colours = {t.left for t in w.tiles}
    down_colours = {t.down for t in w.tiles}
    cells: dict[tuple[int, int], int] = {}
    steps = 0

    def place(at: int) -> bool:
        nonlocal steps
        if at == len(order):
            return True
        col, row = order[at]
        for i, tile in enumerate(w.tiles):
            steps += 1
            if steps > budget:
                raise SearchBudgetExceeded(f"budget {budget} exhausted")
            if col > 0 and w.tiles[cells[(col - 1, row)]].right != tile.left:
                continue
            if row > 0 and w.tiles[cells[(col, row - 1)]].up != tile.down:
                continue
            if col + 1 < width and tile.right not in left_colours:
                continue
            if row + 1 < height and tile.up not in down_colours:
                continue
            cells[(col, row)] = i
            if place(at + 1):
                return True
            del cells[(col, row)]
        return False

    if place(0):
        return Grid(width, height, cells)
    return None


@dataclass
class PeriodicTiling:
    """A p x q torus assignment; unrolling it periodically tiles the plane."""

    periods: tuple[int, int]
    cells: dict[tuple[int, int], int]

    def __post_init__(self):
        self.cells = dict(self.cells)
        p, q = self.periods
        if p < 1 or q < 1:
            raise ValueError("periods must be positive")
        if set(self.cells) != {(c, r) for c in range(p) for r in range(q)}:
            raise ValueError("cells must cover exactly the p x q torus")

    def tile_at(self, m: int, n: int) -> int:
        p, q = self.periods
        return self.cells[(m % p, n % q)]


def torus_adjacency_ok(w: TileSet, t: PeriodicTiling) -> Mismatch | None:
    """Check all torus adjacencies including the wraparound edges."""
    p, q = t.periods
    for col in range(p):
        for row in range(q):
            here = w.tiles[t.cells[(col, row)]]
            right = w.tiles[t.cells[((col + 1) % p, row)]]
            above = w.tiles[t.cells[(col, (row + 1) % q)]]
            if here.right != right.left:
                return Mismatch(col, row, "horizontal")
            if here.up != above.down:
                return Mismatch(col, row, "vertical")
    return None


def unroll(t: PeriodicTiling, width: int, height: int) -> Grid:
    cells = {
        (c, r): t.tile_at(c, r) for c in range(width) for r in range(height)
    }
    return Grid(width, height, cells)


def find_torus(w: TileSet, max_period: int,
               budget: int = DEFAULT_BUDGET) -> PeriodicTiling | None:
    """Smallest-period torus tiling, trying periods in lexicographic order."""
    if not (1 <= max_period <= 4):
        raise ValueError("max_period must be between 1 and 4")
    steps = 0
    for p in range(1, max_period + 1):
        for q in range(1, max_period + 1):
            order = [(c, r) for c in range(p) for r in range(q)]
            cells: dict[tuple[int, int], int] = {}

            def place(at: int) -> bool:
                nonlocal steps
                if at == len(order):
                    return torus_adjacency_ok(w, PeriodicTiling((p, q), cells)) is None
                col, row = order[at]
                for i, tile in enumerate(w.tiles):
                    steps += 1
                    if steps > budget:
                        raise SearchBudgetExceeded(f"budget {budget} exhausted")
                    # check the non-wrap neighbours already placed
                    if col > 0 and w.tiles[cells[(col - 1, row)]].right != tile.left:
                        continue
                    if row > 0 and w.tiles[cells[(col, row - 1)]].up != tile.down:
                        continue
                    cells[(col, row)] = i
                    if place(at + 1):
                        return True
                    del cells[(col, row)]
                return False

            if place(0):
                return PeriodicTiling((p, q), cells)
    return None


# -- tile set file format ------------------------------------------------------
#
#   # comment
#   name u d l r       one tile per line, natural colours


def parse_tileset_file(text: str) -> TileSet:
    names: list[str] = []
    tiles: list[Tile] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"line {lineno}: expected 'name u d l r'")
        name = parts[0]
        if not IDENT_RE.fullmatch(name) or name in RESERVED_WORDS:
            raise ValueError(f"line {lineno}: bad tile name {name!r}")
        try:
            u, d, l, r = (int(p) for p in parts[1:])
        except ValueError:
            raise ValueError(f"line {lineno}: colours must be naturals") from None
        names.append(name)
        tiles.append(Tile(u, d, l, r))
    if not tiles:
        raise ValueError("tile set file has no tiles")
    return TileSet(tuple(names), tuple(tiles))


def render_tileset_file(w: TileSet) -> str:
    lines = [
        f"{name} {t.up} {t.down} {t.left} {t.right}"
        for name, t in zip(w.names, w.tiles)
    ]
    return "\n".join(lines) + "\n"


def render_ascii(w: TileSet, g: Grid) -> str:
    """One character per cell (tile name initial), top row first."""
    rows = []
    for row in range(g.height - 1, -1, -1):
        rows.append("".join(w.names[g.tile_at(col, row)][0] for col in range(g.width)))
    return "\n".join(rows) + "\n"


_SVG_HUES = (0, 210, 120, 30, 280, 60, 330, 170)


def _colour_style(colour: int) -> str:
    hue = _SVG_HUES[colour % len(_SVG_HUES)]
    light = 70 - 25 * (colour // len(_SVG_HUES) % 2)
    return f"hsl({hue},70%,{light}%)"


def render_svg(w: TileSet, g: Grid, cell: int = 40) -> str:
    """Unit squares with edge triangles coloured by edge colour index."""
    width, height = g.width * cell, g.height * cell
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for (col, row), idx in sorted(g.cells.items()):
        t = w.tiles[idx]
        x0, y0 = col * cell, (g.height - 1 - row) * cell
        x1, y1 = x0 + cell, y0 + cell
        cx, cy = x0 + cell // 2, y0 + cell // 2
        for colour, tri in (
            (t.up, f"{x0},{y0} {x1},{y0} {cx},{cy}"),
            (t.right, f"{x1},{y0} {x1},{y1} {cx},{cy}"),
            (t.down, f"{x1},{y1} {x0},{y1} {cx},{cy}"),
            (t.left, f"{x0},{y1} {x0},{y0} {cx},{cy}"),
        ):
            parts.append(
                f'<polygon points="{tri}" fill="{_colour_style(colour)}" '
                f'stroke="black" stroke-width="1"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

