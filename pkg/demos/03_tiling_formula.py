# The reduction from tile sets to modal formulas: a tile set W maps to a
# formula that is valid over the powerset-of-naturals frame exactly when W
# cannot tile the quadrant.

from tilemodal import formula as fm
from tilemodal.reduction import conjuncts, phi, phi_stats
from tilemodal.tiling import Tile, TileSet

mono = TileSet(("t1",), (Tile(0, 0, 0, 0),))

print("the 15 body conjuncts for a single self-matching tile:")
for name, f in conjuncts(mono):
    print(f"  {name:8s} {fm.render(f)}")

print()
print("full formula:")
print(" ", fm.render(phi(mono)))
print()
print("stats:", phi_stats(mono))

# Formula size grows quadratically with the tile count: each tile literal
# mentions every tile letter, and the step conjuncts sum literals per tile.
for n in (1, 2, 4, 8):
    w = TileSet(tuple(f"t{i+1}" for i in range(n)), (Tile(0, 0, 0, 0),) * n)
    print(f"{n} tiles -> {phi_stats(w)['nodes']} nodes")

# The formula round-trips through the concrete syntax.
f = phi(mono)
assert fm.parse(fm.render(f)) == f
print("parse(render(phi)) is structurally identical")
