"""Naive reference implementations used by the test suite.

``greedy_reference`` re-reads the selection procedure line by line and
shares no logic with the engine, so a transcription bug in either side
shows up as a disagreement. ``exhaustive_min_pairwise`` brute-forces the
best one-node-per-class combination under the pairwise-sum objective as a
lower-bound benchmark for the greedy. Neither is built for speed.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Sequence

from .engine import (
    ClusterResult,
    DistanceFn,
    EmptyTreeError,
    MatrixRow,
    Node,
    PreferenceTree,
    boundary_hull,
)

__all__ = [
    "TooLargeError",
    "greedy_reference",
    "exhaustive_min_pairwise",
    "pairwise_objective",
]

EXHAUSTIVE_COMBINATION_LIMIT = 10**6


class TooLargeError(ValueError):
    """The instance exceeds the brute-force combination budget."""


def greedy_reference(tree: PreferenceTree, metric: DistanceFn) -> ClusterResult:
    """Second, deliberately plain transliteration of the greedy procedure."""
    non_empty = [c for c in tree.classes if c.nodes]
    if not non_empty:
        raise EmptyTreeError("every class is empty")

    evals = 0
    s_list: list[Node] = []
    rows: list[MatrixRow] = []
    first = True

    for cls in non_empty:
        distance_list: list[float] = []
        if first:
            for cand in cls.nodes:
                d = 0.0
                for other_cls in non_empty:
                    if other_cls is cls:
                        continue
                    for item in other_cls.nodes:
                        d += metric(cand, item)
                        evals += 1
                distance_list.append(d)
            first = False
        else:
            for cand in cls.nodes:
                d = 0.0
                for chosen in s_list:
                    d += metric(cand, chosen)
                    evals += 1
                distance_list.append(d)

        best_i = 0
        for i in range(1, len(distance_list)):
            if distance_list[i] < distance_list[best_i]:
                best_i = i
        chosen_node = cls.nodes[best_i]
        chosen_score = distance_list[best_i]
        s_list.append(chosen_node)
        rows.append(
            MatrixRow(
                step=len(rows) + 1,
                node=chosen_node,
                class_name=cls.name,
                s_snapshot=tuple(r.class_name for r in rows) + (cls.name,),
                distance_km=chosen_score,
                total_km=sum(distance_list),
                factor=sum(distance_list) / chosen_score if chosen_score > 0.0 else None,
            )
        )

    points = [n.point for n in s_list if n.point is not None]
    hull = boundary_hull(points) if len(points) == len(s_list) else None
    return ClusterResult(
        selected=tuple(s_list),
        matrix=tuple(rows),
        skipped_classes=tuple(c.name for c in tree.classes if not c.nodes),
        hull=hull,
        distance_evals=evals,
    )


def pairwise_objective(selection: Sequence[Node], metric: DistanceFn) -> float:
    """Sum of metric distances over all unordered pairs of the selection."""
    if not selection:
        raise ValueError("selection must contain at least one node")
    return sum(metric(a, b) for a, b in combinations(selection, 2))


def exhaustive_min_pairwise(
    tree: PreferenceTree, metric: DistanceFn
) -> tuple[tuple[Node, ...], float]:
    """Enumerate every one-node-per-class combination; return the one with
    the smallest pairwise-sum objective (first in lexicographic index order
    on ties) and its objective value."""
    groups = [c.nodes for c in tree.classes if c.nodes]
    if not groups:
        raise EmptyTreeError("every class is empty")

    count = 1
    for g in groups:
        count *= len(g)
        if count > EXHAUSTIVE_COMBINATION_LIMIT:
            raise TooLargeError(
                f"combination count exceeds {EXHAUSTIVE_COMBINATION_LIMIT}"
            )

    best: tuple[Node, ...] | None = None
    best_value = float("inf")
    for combo in product(*groups):
        value = pairwise_objective(combo, metric)
        if value < best_value:
            best = combo
            best_value = value
    assert best is not None
    return best, best_value
