"""Workbench for modal logic over associative frames.

Subpackages cover the modal language and its Kripke semantics, finite
ternary-relation frames, Wang tilings, the tile-set-to-formula reduction,
tiling extraction from countermodels, bounded symbolic checking over the
powerset-of-naturals frame, and propositional team logic.
"""

from tilemodal import (
    extraction,
    formula,
    frames,
    powerset_symbolic,
    reduction,
    semantics,
    team_logic,
    tiling,
)

__all__ = [
    "extraction",
    "formula",
    "frames",
    "powerset_symbolic",
    "reduction",
    "semantics",
    "team_logic",
    "tiling",
]
