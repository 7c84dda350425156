"""GeoJSON and self-contained HTML map output for a selection result.

The GeoJSON FeatureCollection is the single interchange format: one Point
feature per venue (class, name, selected flag, and the selection scores on
the chosen ones) plus one Polygon feature for the boundary, in a fixed
order so output is byte-deterministic. The HTML map embeds that GeoJSON
inline together with a legend and renders it on a slippy map; the file is
standalone and can be archived or shared.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .dataio import _emit
from .engine import ClusterResult, PreferenceTree

__all__ = [
    "PALETTE",
    "LegendEntry",
    "InconsistentInputError",
    "to_geojson",
    "legend",
    "render_html",
]

# Fixed 30-color palette, assigned to classes by index. Chosen for contrast
# on light map tiles; never hashed so renders are reproducible.
PALETTE: tuple[str, ...] = (
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
    "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080",
    "#e6beff", "#9a6324", "#fffac8", "#800000", "#aaffc3",
    "#808000", "#ffd8b1", "#000075", "#808080", "#ffe119",
    "#a9a9a9", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#17becf",
)

DEFAULT_TILES = {
    "openstreetmap": "https://tile.openstreetmap.org/{z}/{x}/{y}.png",
    "terrain": "https://tiles.stadiamaps.com/tiles/stamen_terrain/{z}/{x}/{y}.png",
}

TILE_ATTRIBUTION = {
    "openstreetmap": "&copy; OpenStreetMap contributors",
    "terrain": "&copy; Stadia Maps &copy; Stamen Design &copy; OpenStreetMap contributors",
}


class InconsistentInputError(ValueError):
    """The result does not belong to the given tree."""


@dataclass(frozen=True)
class LegendEntry:
    class_name: str
    color: str
    count: int
    selected_name: Optional[str]


def _selected_index_by_class(result: ClusterResult, tree: PreferenceTree) -> dict[str, int]:
    """Map class name -> index of the chosen node within its class.

    Ties (duplicate nodes) resolve to the first equal node, matching the
    engine's lowest-index tie-break, so exactly one feature per class is
    flagged selected.
    """
    chosen: dict[str, int] = {}
    for node, row in zip(result.selected, result.matrix):
        cls = next((c for c in tree.classes if c.name == row.class_name), None)
        if cls is None:
            raise InconsistentInputError(f"selected class {row.class_name!r} not in tree")
        try:
            chosen[cls.name] = cls.nodes.index(node)
        except ValueError:
            raise InconsistentInputError(
                f"selected node {node.name!r} not in class {cls.name!r}"
            ) from None
    return chosen


def to_geojson(result: ClusterResult, tree: PreferenceTree) -> str:
    """FeatureCollection text: venue Points in class-then-node order, the
    boundary Polygon last. Coordinates are [lon, lat]."""
    chosen = _selected_index_by_class(result, tree)
    score_by_class = {row.class_name: row for row in result.matrix}

    features = []
    for cls in tree.classes:
        for i, node in enumerate(cls.nodes):
            if node.point is None:
                raise InconsistentInputError(f"node {node.name!r} has no coordinates")
            selected = chosen.get(cls.name) == i
            properties: dict = {
                "class": cls.name,
                "name": node.name,
                "selected": selected,
            }
            if selected:
                row = score_by_class[cls.name]
                properties["D"] = row.distance_km
                properties["T"] = row.total_km
                if row.factor is not None:
                    properties["k"] = row.factor
            features.append(
                {
                    "type": "Feature",
                    "geometry": {
                        "type": "Point",
                        "coordinates": [node.point.lon, node.point.lat],
                    },
                    "properties": properties,
                }
            )
    if result.hull is not None:
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [[[p.lon, p.lat] for p in result.hull]],
                },
                "properties": {"boundary": True},
            }
        )

    out: list[str] = []
    _emit({"type": "FeatureCollection", "features": features}, out)
    return "".join(out)


def legend(tree: PreferenceTree, result: ClusterResult) -> list[LegendEntry]:
    """One entry per class in order; colors come from the fixed palette."""
    selected_names = {row.class_name: row.node.name for row in result.matrix}
    return [
        LegendEntry(
            class_name=cls.name,
            color=PALETTE[i % len(PALETTE)],
            count=len(cls.nodes),
            selected_name=selected_names.get(cls.name),
        )
        for i, cls in enumerate(tree.classes)
    ]


_HTML_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<meta name="viewport" content="width=device-width, initial-scale=1">
<title>Preference cluster map</title>
<link rel="stylesheet" href="https://unpkg.com/leaflet@1.9.4/dist/leaflet.css">
<script src="https://unpkg.com/leaflet@1.9.4/dist/leaflet.js"></script>
<style>
  html, body { height: 100%; margin: 0; }
  #map { position: absolute; top: 0; bottom: 0; left: 220px; right: 0; }
  #legend {
    position: absolute; top: 0; bottom: 0; left: 0; width: 220px;
    overflow-y: auto; background: #fafafa; border-right: 1px solid #ddd;
    font: 13px/1.5 system-ui, sans-serif; padding: 10px; box-sizing: border-box;
  }
  #legend h1 { font-size: 15px; margin: 0 0 8px; }
  .legend-item { margin-bottom: 6px; }
  .swatch {
    display: inline-block; width: 11px; height: 11px; border-radius: 50%;
    margin-right: 6px; border: 1px solid #555; vertical-align: baseline;
  }
  .legend-pick { color: #555; font-size: 12px; margin-left: 18px; }
</style>
</head>
<body>
<div id="legend"><h1>Preferences</h1></div>
<div id="map"></div>
<script>
var GEOJSON = __GEOJSON__;
var LEGEND = __LEGEND__;
var TILE_URL = __TILE_URL__;
var TILE_ATTRIBUTION = __TILE_ATTRIBUTION__;

var map = L.map("map");
L.tileLayer(TILE_URL, {attribution: TILE_ATTRIBUTION, maxZoom: 19}).addTo(map);

var colorByClass = {};
var legendBox = document.getElementById("legend");
LEGEND.forEach(function (entry) {
  colorByClass[entry.class] = entry.color;
  var item = document.createElement("div");
  item.className = "legend-item";
  var line = document.createElement("div");
  var swatch = document.createElement("span");
  swatch.className = "swatch";
  swatch.style.background = entry.color;
  line.appendChild(swatch);
  line.appendChild(document.createTextNode(entry.class + " (" + entry.count + ")"));
  item.appendChild(line);
  if (entry.selected) {
    var pick = document.createElement("div");
    pick.className = "legend-pick";
    pick.textContent = "\\u2192 " + entry.selected;
    item.appendChild(pick);
  }
  legendBox.appendChild(item);
});

function popupHtml(props) {
  var parts = ["<b>" + props.name + "</b>", "class: " + props.class];
  if (props.selected) {
    parts.push("D: " + props.D.toFixed(6) + " km");
    parts.push("T: " + props.T.toFixed(6) + " km");
    if (props.k !== undefined) { parts.push("k: " + props.k.toFixed(6)); }
  }
  return parts.join("<br>");
}

var bounds = [];
GEOJSON.features.forEach(function (feature) {
  if (feature.geometry.type === "Point") {
    var lon = feature.geometry.coordinates[0];
    var lat = feature.geometry.coordinates[1];
    var props = feature.properties;
    var marker = L.circleMarker([lat, lon], {
      radius: props.selected ? 9 : 5,
      color: props.selected ? "#222" : colorByClass[props.class],
      weight: props.selected ? 2 : 1,
      fillColor: colorByClass[props.class],
      fillOpacity: props.selected ? 0.95 : 0.7
    }).addTo(map);
    marker.bindPopup(popupHtml(props));
    bounds.push([lat, lon]);
  } else if (feature.geometry.type === "Polygon") {
    var ring = feature.geometry.coordinates[0].map(function (pair) {
      return [pair[1], pair[0]];
    });
    L.polygon(ring, {color: "#d33", weight: 2, fill: false}).addTo(map);
  }
});
if (bounds.length > 0) {
  map.fitBounds(bounds, {padding: [20, 20]});
} else {
  map.setView([0, 0], 2);
}
</script>
</body>
</html>
"""


def render_html(
    result: ClusterResult,
    tree: PreferenceTree,
    style: str = "openstreetmap",
    tiles: dict[str, str] | None = None,
) -> str:
    """Single-file interactive map: inline GeoJSON, class-colored circle
    markers with pop-ups, boundary outline, fixed legend panel, viewport
    fitted to the data. Same inputs produce identical bytes."""
    if style not in DEFAULT_TILES:
        raise ValueError(f"unknown map style {style!r}")
    tile_url = (tiles or {}).get(style) or DEFAULT_TILES[style]

    legend_doc = [
        {
            "class": e.class_name,
            "color": e.color,
            "count": e.count,
            "selected": e.selected_name,
        }
        for e in legend(tree, result)
    ]
    legend_out: list[str] = []
    _emit(legend_doc, legend_out)

    return (
        _HTML_TEMPLATE
        .replace("__GEOJSON__", to_geojson(result, tree))
        .replace("__LEGEND__", "".join(legend_out))
        .replace("__TILE_URL__", json.dumps(tile_url))
        .replace("__TILE_ATTRIBUTION__", json.dumps(TILE_ATTRIBUTION[style]))
    )
