"""Betti numbers, additive Chow bases and ring presentations for the moduli
spaces of genus-zero stable maps M̄_{0,m}(P^n, d)."""

from .basis import BasisClass, RingExpression, class_expression, emit_relations, enumerate_basis
from .partitions import (
    TwoPartition,
    are_compatible,
    contract_edge,
    good_family_to_tree,
    is_good_family,
    tree_to_good_family,
)
from .poincare import (
    PoincareQuery,
    betti_table,
    p_l_m,
    poincare_direct,
    poincare_recursive,
    s_p00,
)
from .qpoly import GFTable, QPoly, gaussian_binomial, q_int, star, sym_power
from .trees import (
    BStructure,
    MDTree,
    RootedMTree,
    assign_D_labels,
    enumerate_b_structures,
    enumerate_stable_trees,
    tree_contribution,
)

__version__ = "0.1.0"


def clear_caches() -> None:
    """Drop every memo table (recursion tables and tree enumeration caches)."""
    from . import poincare, trees

    poincare.clear_memo()
    for fn in (
        trees._subtrees,
        trees._leafless_forests,
        trees._forests,
        trees._stable_trees,
        trees._weight,
        trees._md_subtrees,
        trees._md_forests,
    ):
        fn.cache_clear()
