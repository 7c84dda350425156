"""Greedy one-node-per-class selection over an injected distance function.

The selection walks the classes in their given order. Candidates of the
first non-empty class are scored by their summed distance to every node of
every other class; candidates of each later class are scored by their
summed distance to the nodes already selected. The minimum-score candidate
wins, ties broken by lowest input index. Alongside the selection the engine
records one matrix row per step: the chosen score D, the total T of all
candidate scores in that class, and the factor k = T / D.

The distance function is injected so the engine works both on geographic
trees (haversine) and on abstract edge-weighted graphs in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .geo import GeoPoint

__all__ = [
    "Node",
    "PreferenceClass",
    "PreferenceTree",
    "DistanceFn",
    "MatrixRow",
    "ClusterResult",
    "EmptyTreeError",
    "EmptyClassError",
    "jjcluster",
    "candidate_scores",
    "optimization_matrix",
    "boundary_hull",
    "predicted_distance_evals",
]


# Total, symmetric, non-negative; only inter-class pairs are ever requested.
DistanceFn = Callable[["Node", "Node"], float]


class EmptyTreeError(ValueError):
    """No class in the tree has any node."""


class EmptyClassError(ValueError):
    """The addressed class has no nodes."""


@dataclass(frozen=True)
class Node:
    """A named candidate belonging to one class.

    ``point`` is None for abstract-metric nodes; the injected distance
    function then identifies nodes by name or identity.
    """

    class_id: int
    name: str
    point: Optional[GeoPoint] = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("node name must be non-empty")
        if self.class_id < 0:
            raise ValueError(f"class_id must be >= 0, got {self.class_id}")


@dataclass(frozen=True)
class PreferenceClass:
    name: str
    nodes: tuple[Node, ...]

    @property
    def empty(self) -> bool:
        return not self.nodes


@dataclass(frozen=True)
class PreferenceTree:
    """Ordered classes, each an ordered list of nodes.

    Class order is the caller's preference order and is never rearranged;
    node order within a class is preserved exactly because tie-breaking
    depends on it. Empty classes are representable and later skipped.
    """

    classes: tuple[PreferenceClass, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for i, cls in enumerate(self.classes):
            if not cls.name:
                raise ValueError(f"class {i} has an empty name")
            folded = cls.name.casefold()
            if folded in seen:
                raise ValueError(f"duplicate class name (case-insensitive): {cls.name!r}")
            seen.add(folded)
            for node in cls.nodes:
                if node.class_id != i:
                    raise ValueError(
                        f"node {node.name!r} carries class_id {node.class_id}, expected {i}"
                    )

    @classmethod
    def build(cls, classes: Sequence[tuple[str, Sequence[tuple[str, Optional[GeoPoint]]]]]) -> "PreferenceTree":
        """Build a tree from (class_name, [(node_name, point-or-None), ...]) pairs."""
        built = []
        for i, (name, nodes) in enumerate(classes):
            built.append(PreferenceClass(name, tuple(Node(i, n, p) for n, p in nodes)))
        return cls(tuple(built))

    def empty_class_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.classes if c.empty)

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(c.nodes) for c in self.classes)


@dataclass(frozen=True)
class MatrixRow:
    """One selection step: who was chosen and at what cost.

    ``s_snapshot`` carries the class names selected through this step
    (including this row). ``factor`` is total_km / distance_km and is
    absent (None) when the chosen score is zero.
    """

    step: int
    node: Node
    class_name: str
    s_snapshot: tuple[str, ...]
    distance_km: float
    total_km: float
    factor: Optional[float]


@dataclass(frozen=True)
class ClusterResult:
    selected: tuple[Node, ...]
    matrix: tuple[MatrixRow, ...]
    skipped_classes: tuple[str, ...]
    hull: Optional[tuple[GeoPoint, ...]]
    distance_evals: int


@dataclass
class _EvalCounter:
    metric: DistanceFn
    count: int = 0

    def __call__(self, a: Node, b: Node) -> float:
        self.count += 1
        return self.metric(a, b)


def candidate_scores(
    tree: PreferenceTree,
    class_index: int,
    selected_so_far: Sequence[Node],
    metric: DistanceFn,
) -> list[tuple[Node, float]]:
    """Score every candidate of one class, in node order.

    When nothing is selected yet and ``class_index`` is the first non-empty
    class, each candidate is scored against every node of every other
    class; otherwise against the already-selected nodes.
    """
    cls = tree.classes[class_index]
    if cls.empty:
        raise EmptyClassError(f"class {cls.name!r} has no nodes")

    first_nonempty = next(i for i, c in enumerate(tree.classes) if not c.empty)
    if not selected_so_far and class_index == first_nonempty:
        others = [
            node
            for i, other in enumerate(tree.classes)
            if i != class_index
            for node in other.nodes
        ]
        return [(cand, sum(metric(cand, node) for node in others)) for cand in cls.nodes]
    return [(cand, sum(metric(cand, node) for node in selected_so_far)) for cand in cls.nodes]


def jjcluster(tree: PreferenceTree, metric: DistanceFn) -> ClusterResult:
    """Select one node per non-empty class, greedily minimizing summed distance.

    Returns the selection in class order, the per-step optimization matrix,
    the names of skipped (empty) classes, the convex boundary of the
    selected coordinates when one exists, and the exact number of distance
    evaluations performed.
    """
    if all(c.empty for c in tree.classes):
        raise EmptyTreeError("every class is empty")

    counting = _EvalCounter(metric)
    selected: list[Node] = []
    rows: list[MatrixRow] = []
    skipped: list[str] = []
    snapshot: list[str] = []

    for index, cls in enumerate(tree.classes):
        if cls.empty:
            skipped.append(cls.name)
            continue
        scores = candidate_scores(tree, index, selected, counting)
        best_node, best_score = min(scores, key=lambda pair: pair[1])
        total = sum(score for _, score in scores)
        selected.append(best_node)
        snapshot.append(cls.name)
        rows.append(
            MatrixRow(
                step=len(rows) + 1,
                node=best_node,
                class_name=cls.name,
                s_snapshot=tuple(snapshot),
                distance_km=best_score,
                total_km=total,
                factor=(total / best_score) if best_score > 0.0 else None,
            )
        )

    points = [node.point for node in selected if node.point is not None]
    hull = boundary_hull(points) if len(points) == len(selected) else None

    return ClusterResult(
        selected=tuple(selected),
        matrix=tuple(rows),
        skipped_classes=tuple(skipped),
        hull=hull,
        distance_evals=counting.count,
    )


def optimization_matrix(result: ClusterResult) -> list[MatrixRow]:
    """The per-step matrix of a selection, rows in selection order."""
    return list(result.matrix)


def _cross(o: GeoPoint, a: GeoPoint, b: GeoPoint) -> float:
    # z of (a-o) x (b-o) over (lon, lat) treated as planar x, y
    return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon)


def boundary_hull(points: Sequence[GeoPoint]) -> Optional[tuple[GeoPoint, ...]]:
    """Convex hull of the given points as a closed counter-clockwise ring.

    Monotone chain over (lon, lat) treated as planar coordinates, which is
    a documented city-scale approximation. Returns None for fewer than
    three distinct non-collinear points; the caller should then render a
    line or plain markers instead.
    """
    distinct = sorted(set((p.lon, p.lat) for p in points))
    if len(distinct) < 3:
        return None
    pts = [GeoPoint(lat, lon) for lon, lat in distinct]

    lower: list[GeoPoint] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper: list[GeoPoint] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)

    ring = lower[:-1] + upper[:-1]
    if len(ring) < 3:
        return None  # collinear input
    return tuple(ring) + (ring[0],)


def predicted_distance_evals(class_sizes: Sequence[int]) -> int:
    """Exact distance-evaluation count for the given non-empty class sizes.

    The first class scores each of its n1 candidates against the n - n1
    nodes of the other classes; class i (1-based) thereafter scores each
    candidate against the i - 1 already-selected nodes.
    """
    sizes = list(class_sizes)
    if not sizes:
        return 0
    n = sum(sizes)
    total = sizes[0] * (n - sizes[0])
    for i, size in enumerate(sizes[1:], start=2):
        total += size * (i - 1)
    return total
