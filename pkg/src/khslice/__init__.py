"""Khovanov homology of braid closures and numerical nilpotent-slice geometry."""

from .braid import (
    BraidWord,
    ClosurePermutation,
    parse_braid,
    writhe,
    closure_permutation,
    markov_move,
    free_reduce,
    double,
)
from .diagram import LinkDiagram, CircleSet, braid_closure_diagram, plat_closure

__all__ = [
    "BraidWord",
    "ClosurePermutation",
    "parse_braid",
    "writhe",
    "closure_permutation",
    "markov_move",
    "free_reduce",
    "double",
    "LinkDiagram",
    "CircleSet",
    "braid_closure_diagram",
    "plat_closure",
]

__version__ = "0.1.0"
