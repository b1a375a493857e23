"""Nilpotent graphs of finite permutation groups.

Build the graph whose vertices are the elements outside the hypercenter and
whose edges join pairs generating a nilpotent subgroup, then compute its
components, cliques and shape, and check closed-form predictions against
brute force.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .families import parse_group_spec, psl2, symmetric, dihedral, cyclic  # noqa: E402
from .nilgraph import NilGraph, build_graph  # noqa: E402
from .permcore import PermGroup, Permutation  # noqa: E402

__all__ = [
    "NilGraph",
    "PermGroup",
    "Permutation",
    "build_graph",
    "cyclic",
    "dihedral",
    "parse_group_spec",
    "psl2",
    "symmetric",
]
