// Wire types mirroring the service's request and response bodies.

export type MapStyle = "openstreetmap" | "terrain";

export interface QueryDraft {
  location: string;
  radiusKm: string; // raw form text; validated before submission
  preferences: string[];
  limitPerClass: string;
  mapStyle: MapStyle;
}

export interface ClusterRequest {
  location: string;
  radius_km: number;
  preferences: string[];
  limit_per_class: number;
  map_style: MapStyle;
}

export interface SelectedEntry {
  class: string;
  name: string;
  lat: number | null;
  lon: number | null;
}

export interface MatrixRow {
  step: number;
  name: string;
  class: string;
  s_snapshot: string[];
  D: number;
  T: number;
  k?: number;
}

export interface LegendEntry {
  class: string;
  color: string;
  count: number;
  selected: string | null;
}

export interface PointProperties {
  class: string;
  name: string;
  selected: boolean;
  D?: number;
  T?: number;
  k?: number;
}

export interface GeoFeature {
  type: "Feature";
  geometry: {
    type: "Point" | "Polygon";
    coordinates: number[] | number[][][];
  };
  properties: Partial<PointProperties> & { boundary?: boolean };
}

export interface FeatureCollection {
  type: "FeatureCollection";
  features: GeoFeature[];
}

export interface ClusterResponse {
  selected: SelectedEntry[];
  matrix: MatrixRow[];
  skipped_classes: string[];
  hull: number[][] | null;
  distance_evals: number;
  geojson: FeatureCollection;
  legend: LegendEntry[];
  query_echo: unknown;
}

export interface ApiErrorBody {
  error: { code: string; message: string; field?: string };
}
