# Wang tiles: adjacency checking, bounded rectangle solving, and periodic
# (torus) tilings whose unrolling covers the whole quadrant.

from tilemodal.tiling import (
    Tile,
    TileSet,
    find_torus,
    render_ascii,
    render_svg,
    solve_rect,
    unroll,
    verify_grid,
)

# Two tiles that force horizontal alternation: a's right edge only matches
# b's left edge and vice versa.
swap = TileSet(("a", "b"), (Tile(0, 0, 1, 2), Tile(0, 0, 2, 1)))

grid = solve_rect(swap, 6, 3)
print("6x3 solution (top row first):")
print(render_ascii(swap, grid), end="")
assert verify_grid(swap, grid) is None

torus = find_torus(swap, 2)
print("torus periods:", torus.periods)
big = unroll(torus, 8, 4)
assert verify_grid(swap, big) is None
print("unrolled 8x4 rectangle verifies")

# A tile whose up and down colours differ can never stack.
stuck = TileSet(("s",), (Tile(0, 1, 0, 0),))
print("1x2 column with mismatched vertical colours:",
      solve_rect(stuck, 1, 2))

# SVG rendering colours each edge by its colour index.
svg = render_svg(swap, solve_rect(swap, 4, 2))
print(f"svg render: {len(svg)} bytes, {svg.count('<polygon')} edge triangles")
