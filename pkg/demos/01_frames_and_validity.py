# Frames with a ternary accessibility relation, the derived S relation,
# and frame validity of the associativity axiom.

from tilemodal.formula import parse
from tilemodal.frames import (
    Frame,
    check_associative,
    enumerate_frames,
    powerset_frame,
    s_relation,
    semilattice_frame,
)
from tilemodal.semantics import Refuted, frame_validity

# The powerset of {0,1} under union, worlds indexed by subset bitmask.
frame = powerset_frame(2, "union")
print(f"powerset frame on 2 generators: {frame.size} worlds, "
      f"{len(frame.triples)} triples")
print("associative:", check_associative(frame) is None)

# The derived S relation on a semilattice is its induced order.
chain = semilattice_frame([[max(x, y) for y in range(3)] for x in range(3)])
print("S on the 3-chain:", sorted(s_relation(chain).pairs))

# A single dangling triple breaks associativity; the checker reports the
# least failing quadruple and the direction that fails.
broken = Frame(2, frozenset({(0, 0, 1)}))
print("broken frame:", check_associative(broken))

# The associativity axiom is valid exactly on associative frames.
axiom = parse("(p o q) o r <-> p o (q o r)")
print("axiom on the powerset frame:", frame_validity(frame, axiom))
verdict = frame_validity(broken, axiom)
assert isinstance(verdict, Refuted)
print(f"axiom on the broken frame: refuted at world {verdict.world} "
      f"under {verdict.model.valuation}")

# Enumeration streams frames up to isomorphism; on 2 worlds, 28 of the 136
# canonical frames are associative.
assoc = list(enumerate_frames(2, require_associative=True))
print(f"canonical associative frames on 2 worlds: {len(assoc)}")
for fr in assoc[:3]:
    print("  e.g.", sorted(fr.triples))
