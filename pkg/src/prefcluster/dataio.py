"""Parsing and serialization of preference trees and selection results.

Tree files are either CSV with the fixed header ``class,name,lat,lon`` or
a JSON array of ``{class, nodes: [{name, lat, lon}]}`` objects. Parsing
never reorders anything: class order is first-appearance order and node
order within a class is kept verbatim, because selection tie-breaking
depends on it. Result JSON uses a stable field order and emits numbers
with 9 significant digits so golden files are byte-comparable.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from typing import Any

from .engine import ClusterResult, Node, PreferenceClass, PreferenceTree
from .geo import GeoPoint, OutOfRangeError

__all__ = [
    "TreeParseError",
    "EmptyFileError",
    "BadHeaderError",
    "BadCoordinateError",
    "MalformedError",
    "parse_tree_csv",
    "parse_tree_json",
    "serialize_tree_csv",
    "serialize_result_json",
    "parse_result_json",
]

logger = logging.getLogger(__name__)

CSV_HEADER = ("class", "name", "lat", "lon")


class TreeParseError(ValueError):
    """Base class for tree/result document errors."""


class EmptyFileError(TreeParseError):
    pass


class BadHeaderError(TreeParseError):
    pass


class BadCoordinateError(TreeParseError):
    """Invalid latitude/longitude; ``location`` is a row number or JSON path."""

    def __init__(self, location, detail: str):
        self.location = location
        super().__init__(f"bad coordinate at {location}: {detail}")


class MalformedError(TreeParseError):
    """Structurally invalid document; ``location`` is a row number or JSON path."""

    def __init__(self, location, detail: str):
        self.location = location
        super().__init__(f"malformed input at {location}: {detail}")


def _group_into_tree(rows: list[tuple[str, str, GeoPoint]]) -> PreferenceTree:
    # first-appearance class order, case-insensitive identity, first spelling kept
    order: list[str] = []
    by_class: dict[str, list[tuple[str, GeoPoint]]] = {}
    spelling: dict[str, str] = {}
    for class_name, node_name, point in rows:
        key = class_name.casefold()
        if key not in by_class:
            by_class[key] = []
            spelling[key] = class_name
            order.append(key)
        by_class[key].append((node_name, point))
    classes = []
    for i, key in enumerate(order):
        nodes = tuple(Node(i, name, point) for name, point in by_class[key])
        classes.append(PreferenceClass(spelling[key], nodes))
    return PreferenceTree(tuple(classes))


def parse_tree_csv(text: str) -> PreferenceTree:
    """Parse the CSV tree format. Header must be exactly class,name,lat,lon
    (case-insensitive); names are trimmed; coordinates validated."""
    if not text.strip():
        raise EmptyFileError("empty tree file")

    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyFileError("empty tree file") from None
    if tuple(cell.strip().lower() for cell in header) != CSV_HEADER:
        raise BadHeaderError(
            f"expected header class,name,lat,lon, got {','.join(header)!r}"
        )

    rows: list[tuple[str, str, GeoPoint]] = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise MalformedError(lineno, f"expected 4 fields, got {len(row)}")
        class_name, node_name = row[0].strip(), row[1].strip()
        if not class_name or not node_name:
            raise MalformedError(lineno, "class and name must be non-empty")
        try:
            point = GeoPoint(float(row[2]), float(row[3]))
        except (ValueError, OutOfRangeError) as exc:
            raise BadCoordinateError(lineno, str(exc)) from exc
        rows.append((class_name, node_name, point))
    return _group_into_tree(rows)


def _require(cond: bool, path: str, detail: str) -> None:
    if not cond:
        raise MalformedError(path, detail)


def parse_tree_json(text: str) -> PreferenceTree:
    """Parse the JSON tree format: an array of {class, nodes: [{name, lat, lon}]}.

    Duplicate class entries (case-insensitive) are merged onto the first
    occurrence, preserving node order, with a warning. Classes with an
    empty nodes array stay in the tree, empty, at their original position.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedError("$", f"not valid JSON: {exc}") from exc
    _require(isinstance(doc, list), "$", "top level must be an array of classes")

    order: list[str] = []
    spelling: dict[str, str] = {}
    nodes_by: dict[str, list[tuple[str, GeoPoint]]] = {}
    for i, entry in enumerate(doc):
        path = f"$[{i}]"
        _require(isinstance(entry, dict), path, "class entry must be an object")
        class_name = entry.get("class")
        _require(
            isinstance(class_name, str) and bool(class_name.strip()),
            f"{path}.class",
            "class must be a non-empty string",
        )
        class_name = class_name.strip()
        nodes = entry.get("nodes")
        _require(isinstance(nodes, list), f"{path}.nodes", "nodes must be an array")
        key = class_name.casefold()
        if key in nodes_by:
            logger.warning(
                "duplicate class %r at %s merged into earlier entry", class_name, path
            )
        else:
            order.append(key)
            spelling[key] = class_name
            nodes_by[key] = []
        for j, node in enumerate(nodes):
            npath = f"{path}.nodes[{j}]"
            _require(isinstance(node, dict), npath, "node must be an object")
            name = node.get("name")
            _require(
                isinstance(name, str) and bool(name.strip()),
                f"{npath}.name",
                "name must be a non-empty string",
            )
            lat, lon = node.get("lat"), node.get("lon")
            for field, value in (("lat", lat), ("lon", lon)):
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise BadCoordinateError(f"{npath}.{field}", "must be a number")
            try:
                point = GeoPoint(float(lat), float(lon))
            except OutOfRangeError as exc:
                raise BadCoordinateError(f"{npath}.{exc.field}", str(exc)) from exc
            nodes_by[key].append((name.strip(), point))

    classes = []
    for i, key in enumerate(order):
        classes.append(
            PreferenceClass(
                spelling[key], tuple(Node(i, n, p) for n, p in nodes_by[key])
            )
        )
    return PreferenceTree(tuple(classes))


def serialize_tree_csv(tree: PreferenceTree) -> str:
    """Inverse of parse_tree_csv; UTF-8 text with LF line endings."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for cls in tree.classes:
        for node in cls.nodes:
            writer.writerow([cls.name, node.name, _fmt(node.point.lat), _fmt(node.point.lon)])
    return out.getvalue()


def _fmt(x: float) -> str:
    """Format a number with 9 significant digits."""
    return format(float(x), ".9g")


def _emit(value: Any, out: list[str]) -> None:
    if value is None:
        out.append("null")
    elif value is True:
        out.append("true")
    elif value is False:
        out.append("false")
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=True))
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(_fmt(value))
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(", ")
            _emit(item, out)
        out.append("]")
    elif isinstance(value, dict):
        out.append("{")
        for i, (k, v) in enumerate(value.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(k, ensure_ascii=True))
            out.append(": ")
            _emit(v, out)
        out.append("}")
    else:  # pragma: no cover
        raise TypeError(f"cannot serialize {type(value)!r}")


def result_to_document(result: ClusterResult) -> dict:
    """The result as a plain dict in the stable serialization field order."""
    selected = [
        {
            "class": row.class_name,
            "name": node.name,
            "lat": node.point.lat if node.point else None,
            "lon": node.point.lon if node.point else None,
        }
        for node, row in zip(result.selected, result.matrix)
    ]
    matrix = []
    for row in result.matrix:
        entry: dict[str, Any] = {
            "step": row.step,
            "name": row.node.name,
            "class": row.class_name,
            "s_snapshot": list(row.s_snapshot),
            "D": row.distance_km,
            "T": row.total_km,
        }
        if row.factor is not None:
            entry["k"] = row.factor
        matrix.append(entry)
    hull = (
        [[p.lon, p.lat] for p in result.hull] if result.hull is not None else None
    )
    return {
        "selected": selected,
        "matrix": matrix,
        "skipped_classes": list(result.skipped_classes),
        "hull": hull,
        "distance_evals": result.distance_evals,
    }


def serialize_result_json(result: ClusterResult) -> str:
    """Serialize a selection result with stable field order and 9-significant-
    digit numbers; the factor k is omitted from rows where it is absent."""
    out: list[str] = []
    _emit(result_to_document(result), out)
    out.append("\n")
    return "".join(out)


def parse_result_json(text: str) -> dict:
    """Parse and validate a serialized result document back into a dict."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedError("$", f"not valid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "$", "result must be an object")
    for key in ("selected", "matrix", "skipped_classes", "distance_evals"):
        _require(key in doc, f"$.{key}", "missing field")
    _require(isinstance(doc["selected"], list), "$.selected", "must be an array")
    _require(isinstance(doc["matrix"], list), "$.matrix", "must be an array")
    _require(
        isinstance(doc["skipped_classes"], list), "$.skipped_classes", "must be an array"
    )
    _require(
        isinstance(doc["distance_evals"], int), "$.distance_evals", "must be an integer"
    )
    hull = doc.get("hull")
    _require(hull is None or isinstance(hull, list), "$.hull", "must be an array or null")
    return doc
