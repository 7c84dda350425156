// DOM and map wiring. All selection math happens server-side; this file
// renders the response and manages form state.

import { getHealth, postCluster, ServiceError } from "./api.js";
import {
  applyError,
  applyResponse,
  beginRequest,
  canSubmit,
  initialState,
  movePreference,
  popupLines,
  removePreference,
  toggleClass,
  validateDraft,
} from "./state.js";
import type { ClusterResponse, MapStyle, QueryDraft } from "./types.js";

declare const L: any; // Leaflet global from the CDN script tag

const state = initialState();
let preferences: string[] = ["restaurant", "gym", "park"];

const $ = (id: string): HTMLElement => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
};

const map = L.map("map").setView([20, 0], 2);
let tileLayer: any = null;
const classLayers = new Map<string, any>();
let hullLayer: any = null;

const TILE_URLS: Record<MapStyle, string> = {
  openstreetmap: "https://tile.openstreetmap.org/{z}/{x}/{y}.png",
  terrain: "https://tiles.stadiamaps.com/tiles/stamen_terrain/{z}/{x}/{y}.png",
};

function setTiles(style: MapStyle): void {
  if (tileLayer) {
    map.removeLayer(tileLayer);
  }
  tileLayer = L.tileLayer(TILE_URLS[style], { maxZoom: 19 }).addTo(map);
}
setTiles("openstreetmap");

function readDraft(): QueryDraft {
  return {
    location: ($("location") as HTMLInputElement).value,
    radiusKm: ($("radius") as HTMLInputElement).value,
    preferences: preferences.slice(),
    limitPerClass: ($("limit") as HTMLInputElement).value,
    mapStyle: ($("style") as HTMLSelectElement).value as MapStyle,
  };
}

function renderPreferenceList(): void {
  const list = $("pref-list");
  list.textContent = "";
  preferences.forEach((pref, index) => {
    const row = document.createElement("li");
    const input = document.createElement("input");
    input.type = "text";
    input.value = pref;
    input.addEventListener("input", () => {
      preferences[index] = input.value;
    });
    row.appendChild(input);
    row.appendChild(rowButton("↑", () => {
      preferences = movePreference(preferences, index, -1);
      renderPreferenceList();
    }));
    row.appendChild(rowButton("↓", () => {
      preferences = movePreference(preferences, index, 1);
      renderPreferenceList();
    }));
    row.appendChild(rowButton("×", () => {
      preferences = removePreference(preferences, index);
      renderPreferenceList();
    }));
    list.appendChild(row);
  });
}

function rowButton(label: string, onClick: () => void): HTMLButtonElement {
  const button = document.createElement("button");
  button.type = "button";
  button.textContent = label;
  button.addEventListener("click", onClick);
  return button;
}

function showFieldErrors(errors: Record<string, string>): void {
  for (const field of ["location", "radius_km", "preferences", "limit_per_class"]) {
    const span = document.getElementById(`err-${field}`);
    if (span) {
      span.textContent = errors[field] ?? "";
    }
  }
}

function showBanner(message: string | null): void {
  const banner = $("banner");
  banner.textContent = message ?? "";
  banner.classList.toggle("visible", message !== null);
}

function classVisible(name: string): boolean {
  return state.visibleClasses.has(name);
}

function renderMarkers(response: ClusterResponse): void {
  for (const layer of classLayers.values()) {
    map.removeLayer(layer);
  }
  classLayers.clear();
  if (hullLayer) {
    map.removeLayer(hullLayer);
    hullLayer = null;
  }

  const colorByClass = new Map<string, string>();
  for (const entry of response.legend) {
    colorByClass.set(entry.class, entry.color);
    classLayers.set(entry.class, L.layerGroup());
  }

  const bounds: [number, number][] = [];
  for (const feature of response.geojson.features) {
    if (feature.geometry.type === "Point") {
      const [lon, lat] = feature.geometry.coordinates as number[];
      const props = feature.properties;
      const className = props.class ?? "";
      const marker = L.circleMarker([lat, lon], {
        radius: props.selected ? 9 : 5,
        color: props.selected ? "#222" : colorByClass.get(className),
        weight: props.selected ? 2 : 1,
        fillColor: colorByClass.get(className),
        fillOpacity: props.selected ? 0.95 : 0.7,
      });
      marker.bindPopup(popupLines(props).join("<br>"));
      const group = classLayers.get(className);
      if (group) {
        marker.addTo(group);
      }
      bounds.push([lat, lon]);
    } else if (feature.geometry.type === "Polygon") {
      const ring = (feature.geometry.coordinates as number[][][])[0].map(
        ([lon, lat]) => [lat, lon] as [number, number],
      );
      hullLayer = L.polygon(ring, { color: "#d33", weight: 2, fill: false }).addTo(map);
    }
  }
  for (const [name, group] of classLayers) {
    if (classVisible(name)) {
      group.addTo(map);
    }
  }
  if (bounds.length > 0) {
    map.fitBounds(bounds, { padding: [20, 20] });
  }
}

function renderLegend(response: ClusterResponse): void {
  const box = $("legend-items");
  box.textContent = "";
  for (const entry of response.legend) {
    const item = document.createElement("div");
    item.className = "legend-item";
    if (!classVisible(entry.class)) {
      item.classList.add("dimmed");
    }
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = entry.color;
    item.appendChild(swatch);
    const label = document.createElement("span");
    label.textContent = `${entry.class} (${entry.count})`;
    item.appendChild(label);
    if (entry.selected) {
      const pick = document.createElement("div");
      pick.className = "legend-pick";
      pick.textContent = `→ ${entry.selected}`;
      item.appendChild(pick);
    }
    item.addEventListener("click", () => {
      if (toggleClass(state, entry.class)) {
        const group = classLayers.get(entry.class);
        if (group) {
          if (classVisible(entry.class)) {
            group.addTo(map);
          } else {
            map.removeLayer(group);
          }
        }
        item.classList.toggle("dimmed", !classVisible(entry.class));
      }
    });
    box.appendChild(item);
  }
}

function renderMatrix(response: ClusterResponse): void {
  const tbody = $("matrix-body");
  tbody.textContent = "";
  for (const row of response.matrix) {
    const tr = document.createElement("tr");
    const cells = [
      String(row.step),
      row.name,
      row.class,
      row.D.toFixed(6),
      row.T.toFixed(6),
      row.k === undefined ? "-" : row.k.toFixed(6),
    ];
    for (const text of cells) {
      const td = document.createElement("td");
      td.textContent = text;
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  }
  $("matrix").classList.toggle("hidden", response.matrix.length === 0);
}

function renderResult(response: ClusterResponse): void {
  renderMarkers(response);
  renderLegend(response);
  renderMatrix(response);
}

async function submit(): Promise<void> {
  if (!canSubmit(state)) {
    return;
  }
  const draft = readDraft();
  const { request, errors } = validateDraft(draft);
  showFieldErrors(errors);
  if (!request) {
    return;
  }
  showBanner(null);
  setTiles(request.map_style);
  const seq = beginRequest(state);
  ($("submit") as HTMLButtonElement).disabled = true;
  try {
    const response = await postCluster(request);
    if (applyResponse(state, seq, response)) {
      renderResult(response);
    }
  } catch (error) {
    const message =
      error instanceof ServiceError
        ? error.field
          ? `${error.field}: ${error.message}`
          : error.message
        : String(error);
    if (applyError(state, seq, message)) {
      showBanner(message); // previous result stays rendered
    }
  } finally {
    if (seq === state.requestSeq) {
      state.busy = false;
      ($("submit") as HTMLButtonElement).disabled = false;
    }
  }
}

function init(): void {
  renderPreferenceList();
  $("add-pref").addEventListener("click", () => {
    preferences = preferences.concat("");
    renderPreferenceList();
  });
  $("query-form").addEventListener("submit", (event) => {
    event.preventDefault();
    void submit();
  });
  void getHealth()
    .then((health) => {
      $("health").textContent = `backend: ${health.backend} · v${health.version}`;
    })
    .catch(() => {
      $("health").textContent = "service unreachable";
    });
}

init();
