"""Shared fixtures and generators for the test suite."""

from __future__ import annotations

import math
import random

from prefcluster.engine import Node, PreferenceTree
from prefcluster.geo import GeoPoint, haversine_km

# The worked four-class example: two candidates in A and B, one in C and D,
# with hand-assigned symmetric edge weights between classes. B1's edges to
# C1/D1 are deliberately large; they never influence any step.
FIG_EDGES: dict[tuple[str, str], float] = {
    ("A1", "B1"): 6.0,
    ("A1", "B2"): 8.0,
    ("A1", "C1"): 12.0,
    ("A1", "D1"): 13.0,
    ("A2", "B1"): 9.0,
    ("A2", "B2"): 7.0,
    ("A2", "C1"): 6.0,
    ("A2", "D1"): 5.0,
    ("B2", "C1"): 7.0,
    ("B2", "D1"): 6.0,
    ("C1", "D1"): 4.0,
    ("B1", "C1"): 20.0,
    ("B1", "D1"): 20.0,
}


def fig_metric(a: Node, b: Node) -> float:
    if a.name == b.name:
        return 0.0
    key = (a.name, b.name)
    if key not in FIG_EDGES:
        key = (b.name, a.name)
    return FIG_EDGES[key]


def fig_tree() -> PreferenceTree:
    return PreferenceTree.build(
        [
            ("A", [("A1", None), ("A2", None)]),
            ("B", [("B1", None), ("B2", None)]),
            ("C", [("C1", None)]),
            ("D", [("D1", None)]),
        ]
    )


def geo_metric(a: Node, b: Node) -> float:
    return haversine_km(a.point, b.point)


def offset_point(center: GeoPoint, east_km: float, north_km: float) -> GeoPoint:
    lat = center.lat + north_km / 110.574
    lon = center.lon + east_km / (111.320 * math.cos(math.radians(center.lat)))
    return GeoPoint(lat, lon)


def random_geo_tree(
    rng: random.Random,
    max_classes: int = 6,
    max_nodes: int = 8,
    center: GeoPoint = GeoPoint(22.5726, 88.3639),
    disc_km: float = 10.0,
) -> PreferenceTree:
    """A random instance: classes of named points uniform in a disc."""
    classes = []
    for i in range(rng.randint(1, max_classes)):
        nodes = []
        for j in range(rng.randint(1, max_nodes)):
            r = disc_km * math.sqrt(rng.random())
            theta = rng.uniform(0.0, 2.0 * math.pi)
            point = offset_point(center, r * math.cos(theta), r * math.sin(theta))
            nodes.append((f"c{i}n{j}", point))
        classes.append((f"class{i}", nodes))
    return PreferenceTree.build(classes)
