"""Desk-scale models of group compactifications built from enveloping
semigroups and from closures of graphs in the Vietoris hyperspace."""

from .errors import (
    BudgetExceeded,
    ClassificationError,
    CompactoidError,
    CoverShapeError,
    DimensionError,
    EmptySetError,
    ImplicationError,
    NotSelfInverse,
    NotSurjective,
)
from .relcore import (
    FinGroupAction,
    FinMap,
    FinRelation,
    FinSet,
    act_right,
    act_up,
    compose_rel,
    converse,
    diagonal_apply,
    ellis_embed,
    graph_of,
    inverse_action,
    product_map,
)
from .invsys import End, SymbolicElement, az_model, bz_model, closure_levelwise, project_graph
from .ellis import EllisModel, ellis_classify, ellis_map
from .graphmap import GraphModel, check_condition_F, graph_map
from .posets import classify, check_implications, compare, collapse_map, verify_map

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ClassificationError",
    "CompactoidError",
    "CoverShapeError",
    "DimensionError",
    "EllisModel",
    "EmptySetError",
    "End",
    "FinGroupAction",
    "FinMap",
    "FinRelation",
    "FinSet",
    "GraphModel",
    "ImplicationError",
    "NotSelfInverse",
    "NotSurjective",
    "SymbolicElement",
    "act_right",
    "act_up",
    "az_model",
    "bz_model",
    "check_condition_F",
    "check_implications",
    "classify",
    "closure_levelwise",
    "collapse_map",
    "compare",
    "compose_rel",
    "converse",
    "diagonal_apply",
    "ellis_classify",
    "ellis_embed",
    "ellis_map",
    "graph_map",
    "graph_of",
    "inverse_action",
    "product_map",
    "project_graph",
    "verify_map",
]
