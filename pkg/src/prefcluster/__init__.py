"""Greedy per-class venue selection over great-circle distances.

Feed a preference tree (ordered classes of named coordinates) to
``jjcluster`` and get back one node per class, the per-step optimization
matrix, and the boundary polygon of the picks. Everything else here is the
plumbing around that: parsing and serializing trees and results, fetching
venues from a provider, rendering maps, and the HTTP/CLI front ends.
"""

__version__ = "0.1.0"

from .engine import (
    ClusterResult,
    MatrixRow,
    Node,
    PreferenceClass,
    PreferenceTree,
    boundary_hull,
    candidate_scores,
    jjcluster,
    optimization_matrix,
    predicted_distance_evals,
)
from .geo import GeoPoint, haversine_km, validate_point

__all__ = [
    "__version__",
    "ClusterResult",
    "MatrixRow",
    "Node",
    "PreferenceClass",
    "PreferenceTree",
    "boundary_hull",
    "candidate_scores",
    "jjcluster",
    "optimization_matrix",
    "predicted_distance_evals",
    "GeoPoint",
    "haversine_km",
    "validate_point",
]
