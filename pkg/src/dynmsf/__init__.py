"""Batch-dynamic minimum spanning forests with single-linkage clustering queries."""

from .graph import (DynMsfError, DuplicateInBatch, EdgeAbsent,
                    EdgeAlreadyPresent, SelfLoop, WeightedEdge, compare)
from .quantile import QuantileSummary, build, combine, merge, prune
from .euler import CycleCreated, EulerForest, NotATreeEdge
from .levels import LevelStructure, ReplacementReport, WrongMode, static_msf
from .paths import CompressedPathTree, NotConnected, PathForest
from .fulldyn import DynamicMsf
from .slhac import SimilarityGraph
from .hacref import Dendrogram, HacResult, LeafMismatch, dendrogram_diff, run_hac
from . import reductions
from . import workload

__all__ = [
    "DynMsfError", "DuplicateInBatch", "EdgeAbsent", "EdgeAlreadyPresent",
    "SelfLoop", "WeightedEdge", "compare",
    "QuantileSummary", "build", "combine", "merge", "prune",
    "CycleCreated", "EulerForest", "NotATreeEdge",
    "LevelStructure", "ReplacementReport", "WrongMode", "static_msf",
    "CompressedPathTree", "NotConnected", "PathForest",
    "DynamicMsf", "SimilarityGraph",
    "Dendrogram", "HacResult", "LeafMismatch", "dendrogram_diff", "run_hac",
    "reductions", "workload",
]
