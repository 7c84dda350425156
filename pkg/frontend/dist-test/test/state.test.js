import assert from "node:assert/strict";
import { test } from "node:test";
import { applyError, applyResponse, beginRequest, canSubmit, initialState, movePreference, popupLines, removePreference, toggleClass, validateDraft, } from "../src/state.js";
function draft(overrides = {}) {
    return {
        location: "Kolkata",
        radiusKm: "10",
        preferences: ["restaurant", "gym"],
        limitPerClass: "50",
        mapStyle: "openstreetmap",
        ...overrides,
    };
}
function response(classes) {
    return {
        selected: classes.map((c) => ({ class: c, name: `${c}-pick`, lat: 0, lon: 0 })),
        matrix: classes.map((c, i) => ({
            step: i + 1,
            name: `${c}-pick`,
            class: c,
            s_snapshot: classes.slice(0, i + 1),
            D: 1.5,
            T: 3.0,
            k: 2.0,
        })),
        skipped_classes: [],
        hull: null,
        distance_evals: 0,
        geojson: { type: "FeatureCollection", features: [] },
        legend: classes.map((c, i) => ({
            class: c,
            color: `#00000${i}`,
            count: 2,
            selected: `${c}-pick`,
        })),
        query_echo: {},
    };
}
test("valid draft produces a request body", () => {
    const { request, errors } = validateDraft(draft());
    assert.deepEqual(errors, {});
    assert.ok(request);
    assert.equal(request.radius_km, 10);
    assert.deepEqual(request.preferences, ["restaurant", "gym"]);
    assert.equal(request.map_style, "openstreetmap");
});
test("zero radius is rejected with a field error and no request", () => {
    const { request, errors } = validateDraft(draft({ radiusKm: "0" }));
    assert.equal(request, null);
    assert.match(errors.radius_km, /radius/);
});
test("radius above the bound is rejected", () => {
    const { errors } = validateDraft(draft({ radiusKm: "50.5" }));
    assert.ok(errors.radius_km);
});
test("non-numeric radius is rejected", () => {
    const { errors } = validateDraft(draft({ radiusKm: "wide" }));
    assert.ok(errors.radius_km);
});
test("empty preference list is rejected", () => {
    const { errors } = validateDraft(draft({ preferences: ["", "  "] }));
    assert.ok(errors.preferences);
});
test("more than thirty preferences rejected", () => {
    const prefs = Array.from({ length: 31 }, (_, i) => `p${i}`);
    const { errors } = validateDraft(draft({ preferences: prefs }));
    assert.ok(errors.preferences);
});
test("duplicate preferences rejected case-insensitively", () => {
    const { errors } = validateDraft(draft({ preferences: ["Gym", "gym"] }));
    assert.match(errors.preferences, /duplicate/);
});
test("limit bounds mirror the service", () => {
    assert.ok(validateDraft(draft({ limitPerClass: "0" })).errors.limit_per_class);
    assert.ok(validateDraft(draft({ limitPerClass: "101" })).errors.limit_per_class);
    assert.ok(validateDraft(draft({ limitPerClass: "2.5" })).errors.limit_per_class);
});
test("blank location rejected", () => {
    const { errors } = validateDraft(draft({ location: "   " }));
    assert.ok(errors.location);
});
test("busy state blocks new submissions", () => {
    const state = initialState();
    assert.ok(canSubmit(state));
    beginRequest(state);
    assert.ok(!canSubmit(state));
});
test("successful response replaces result and shows all classes", () => {
    const state = initialState();
    const seq = beginRequest(state);
    const changed = applyResponse(state, seq, response(["a", "b"]));
    assert.ok(changed);
    assert.ok(!state.busy);
    assert.deepEqual([...state.visibleClasses].sort(), ["a", "b"]);
});
test("stale response is discarded", () => {
    const state = initialState();
    const first = beginRequest(state);
    state.busy = false; // simulate the UI noticing the error/finish
    const second = beginRequest(state);
    assert.ok(!applyResponse(state, first, response(["old"])));
    assert.equal(state.result, null);
    assert.ok(applyResponse(state, second, response(["new"])));
    const rendered = state.result;
    assert.ok(rendered);
    assert.equal(rendered.legend[0].class, "new");
});
test("error keeps the previous result rendered", () => {
    const state = initialState();
    const seq = beginRequest(state);
    applyResponse(state, seq, response(["a"]));
    const seq2 = beginRequest(state);
    assert.ok(applyError(state, seq2, "provider unavailable"));
    assert.equal(state.error, "provider unavailable");
    const retained = state.result;
    assert.ok(retained); // prior result retained
    assert.equal(retained.legend[0].class, "a");
});
test("stale error is ignored", () => {
    const state = initialState();
    const first = beginRequest(state);
    state.busy = false;
    beginRequest(state);
    assert.ok(!applyError(state, first, "old failure"));
    assert.equal(state.error, null);
});
test("toggle hides then restores a class", () => {
    const state = initialState();
    const seq = beginRequest(state);
    applyResponse(state, seq, response(["restaurant", "gym"]));
    assert.ok(toggleClass(state, "restaurant"));
    assert.ok(!state.visibleClasses.has("restaurant"));
    assert.ok(state.visibleClasses.has("gym"));
    assert.ok(toggleClass(state, "restaurant"));
    assert.ok(state.visibleClasses.has("restaurant"));
});
test("toggling an unknown class is a no-op", () => {
    const state = initialState();
    const seq = beginRequest(state);
    applyResponse(state, seq, response(["a"]));
    assert.ok(!toggleClass(state, "nope"));
    assert.deepEqual([...state.visibleClasses], ["a"]);
});
test("popup shows scores for selected features", () => {
    const lines = popupLines({
        name: "restaurant prunier",
        class: "restaurant",
        selected: true,
        D: 1058.644523,
        T: 39840.316139,
        k: 37.633328,
    });
    assert.deepEqual(lines, [
        "restaurant prunier",
        "class: restaurant",
        "D: 1058.644523 km",
        "T: 39840.316139 km",
        "k: 37.633328",
    ]);
});
test("popup omits score lines for unselected features", () => {
    const lines = popupLines({ name: "Somewhere", class: "gym", selected: false });
    assert.deepEqual(lines, ["Somewhere", "class: gym"]);
});
test("popup with missing optional fields renders name only", () => {
    assert.deepEqual(popupLines({ name: "Bare" }), ["Bare"]);
    assert.deepEqual(popupLines({ name: "NoK", class: "a", selected: true, D: 1, T: 2 }), [
        "NoK",
        "class: a",
        "D: 1.000000 km",
        "T: 2.000000 km",
    ]);
});
test("preference reordering is bounded and non-mutating", () => {
    const prefs = ["a", "b", "c"];
    assert.deepEqual(movePreference(prefs, 0, 1), ["b", "a", "c"]);
    assert.deepEqual(movePreference(prefs, 2, 1), ["a", "b", "c"]);
    assert.deepEqual(movePreference(prefs, 0, -1), ["a", "b", "c"]);
    assert.deepEqual(prefs, ["a", "b", "c"]);
});
test("preference removal", () => {
    assert.deepEqual(removePreference(["a", "b", "c"], 1), ["a", "c"]);
    assert.deepEqual(removePreference(["a"], 5), ["a"]);
});
