// Pure view-state logic: everything here is DOM-free so it can be unit
// tested. The UI never computes distances or selections; it only shows
// numbers taken verbatim from the service response.

import type {
  ClusterRequest,
  ClusterResponse,
  MapStyle,
  PointProperties,
  QueryDraft,
} from "./types.js";

// Client-side bounds mirror the service's query validation.
export const MAX_RADIUS_KM = 50;
export const MAX_PREFERENCES = 30;
export const MAX_LIMIT_PER_CLASS = 100;

export interface ViewState {
  result: ClusterResponse | null;
  visibleClasses: Set<string>;
  busy: boolean;
  error: string | null;
  requestSeq: number; // last issued request id
  renderedSeq: number; // id of the request whose result is displayed
}

export function initialState(): ViewState {
  return {
    result: null,
    visibleClasses: new Set(),
    busy: false,
    error: null,
    requestSeq: 0,
    renderedSeq: 0,
  };
}

export interface ValidationResult {
  request: ClusterRequest | null;
  errors: Record<string, string>;
}

export function validateDraft(draft: QueryDraft): ValidationResult {
  const errors: Record<string, string> = {};

  const location = draft.location.trim();
  if (!location) {
    errors.location = "enter a place name";
  }

  const radius = Number(draft.radiusKm);
  if (!draft.radiusKm.trim() || !isFinite(radius)) {
    errors.radius_km = "radius must be a number";
  } else if (radius <= 0 || radius > MAX_RADIUS_KM) {
    errors.radius_km = `radius must be in (0, ${MAX_RADIUS_KM}] km`;
  }

  const preferences = draft.preferences.map((p) => p.trim()).filter((p) => p.length > 0);
  if (preferences.length < 1 || preferences.length > MAX_PREFERENCES) {
    errors.preferences = `need 1..${MAX_PREFERENCES} preferences`;
  } else {
    const seen = new Set<string>();
    for (const pref of preferences) {
      const key = pref.toLowerCase();
      if (seen.has(key)) {
        errors.preferences = `duplicate preference: ${pref}`;
        break;
      }
      seen.add(key);
    }
  }

  const limit = Number(draft.limitPerClass);
  if (!draft.limitPerClass.trim() || !Number.isInteger(limit)) {
    errors.limit_per_class = "limit must be an integer";
  } else if (limit < 1 || limit > MAX_LIMIT_PER_CLASS) {
    errors.limit_per_class = `limit must be in 1..${MAX_LIMIT_PER_CLASS}`;
  }

  if (Object.keys(errors).length > 0) {
    return { request: null, errors };
  }
  return {
    request: {
      location,
      radius_km: radius,
      preferences,
      limit_per_class: limit,
      map_style: draft.mapStyle as MapStyle,
    },
    errors: {},
  };
}

/** A new submission is allowed only when no request is in flight. */
export function canSubmit(state: ViewState): boolean {
  return !state.busy;
}

export function beginRequest(state: ViewState): number {
  state.busy = true;
  state.error = null;
  state.requestSeq += 1;
  return state.requestSeq;
}

/**
 * Apply a successful response. Stale responses (superseded by a newer
 * request) are discarded; returns whether the state changed.
 */
export function applyResponse(state: ViewState, seq: number, response: ClusterResponse): boolean {
  if (seq !== state.requestSeq || seq <= state.renderedSeq) {
    return false;
  }
  state.result = response;
  state.visibleClasses = new Set(response.legend.map((entry) => entry.class));
  state.busy = false;
  state.error = null;
  state.renderedSeq = seq;
  return true;
}

/** A failed request surfaces a message; the previous result stays intact. */
export function applyError(state: ViewState, seq: number, message: string): boolean {
  if (seq !== state.requestSeq) {
    return false;
  }
  state.busy = false;
  state.error = message;
  return true;
}

/** Hide or show one class's markers. Unknown names are a no-op. */
export function toggleClass(state: ViewState, name: string): boolean {
  if (!state.result || !state.result.legend.some((entry) => entry.class === name)) {
    return false;
  }
  if (state.visibleClasses.has(name)) {
    state.visibleClasses.delete(name);
  } else {
    state.visibleClasses.add(name);
  }
  return true;
}

/** Pop-up lines for a feature: name and class always; scores only on the
 * selected node and only when present. */
export function popupLines(props: Partial<PointProperties>): string[] {
  const lines: string[] = [];
  if (props.name) {
    lines.push(props.name);
  }
  if (props.class) {
    lines.push(`class: ${props.class}`);
  }
  if (props.selected) {
    if (typeof props.D === "number") {
      lines.push(`D: ${props.D.toFixed(6)} km`);
    }
    if (typeof props.T === "number") {
      lines.push(`T: ${props.T.toFixed(6)} km`);
    }
    if (typeof props.k === "number") {
      lines.push(`k: ${props.k.toFixed(6)}`);
    }
  }
  return lines;
}

/** Move a preference up (-1) or down (+1); returns a new array. */
export function movePreference(preferences: string[], index: number, delta: -1 | 1): string[] {
  const target = index + delta;
  if (index < 0 || index >= preferences.length || target < 0 || target >= preferences.length) {
    return preferences;
  }
  const out = preferences.slice();
  [out[index], out[target]] = [out[target], out[index]];
  return out;
}

export function removePreference(preferences: string[], index: number): string[] {
  if (index < 0 || index >= preferences.length) {
    return preferences;
  }
  return preferences.slice(0, index).concat(preferences.slice(index + 1));
}
