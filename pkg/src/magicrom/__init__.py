"""Robustness of magic for tensor powers of the |H> and |T> magic states.

Typical use::

    from magicrom import build_polytope, solve_l1
    P = build_polytope(5, "H")
    solve_l1(P).value        # 3.68705...
"""
from .enumerator import (
    ReducedEnumerator,
    TargetVector,
    complete_enumerator,
    convolve,
    project,
    target_vector,
)
from .hierarchy import (
    approx_robustness,
    approx_vertices,
    level_robustness,
    partitions_bounded,
    special_pair_vertices,
)
from .l1 import (
    Decomposition,
    Infeasible,
    robustness_conversion,
    solve_l1,
    split_decomposition,
    st_norm,
)
from .pauli import Graph, PauliElement, StabiliserGroup, graph_state_group
from .polytope import (
    ProjectedPolytope,
    build_levels,
    build_polytope,
    extremal_filter,
    membership_lp,
)

__version__ = "0.1.0"

__all__ = [
    "Decomposition", "Graph", "Infeasible", "PauliElement", "ProjectedPolytope", "ReducedEnumerator",
    "StabiliserGroup", "TargetVector", "approx_robustness", "approx_vertices", "build_levels", "build_polytope",
    "complete_enumerator", "convolve", "extremal_filter", "graph_state_group", "level_robustness",
    "membership_lp", "partitions_bounded", "project", "robustness_conversion", "solve_l1",
    "special_pair_vertices", "split_decomposition", "st_norm", "target_vector",
]
