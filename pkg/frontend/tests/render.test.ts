// Golden rendering: the page for a stored API capture is snapshot-pinned,
// and identical inputs must produce identical markup.

import { describe, expect, it } from "vitest";

import { renderApp } from "../src/app.js";
import { emptyData } from "../src/store.js";
import { initialState, normalizeState } from "../src/state.js";
import { goldenData, goldenState } from "./helpers.js";

describe("golden render", () => {
  it("matches the pinned snapshot for a sequential indicator", () => {
    const html = renderApp(goldenState(), goldenData());
    expect(html).toMatchSnapshot();
  });

  it("is deterministic: same state and data, same markup", () => {
    const a = renderApp(goldenState(), goldenData());
    const b = renderApp(goldenState(), goldenData());
    expect(a).toBe(b);
  });

  it("shows shape, transition and development together for a sequential indicator", () => {
    const html = renderApp(goldenState({ indicator: "Lactate" }), goldenData());
    expect(html).toContain('data-panel="shape"');
    expect(html).toContain('data-panel="transition"');
    expect(html).toContain('data-panel="development"');
    expect(html).not.toContain('data-panel="interaction"');
  });

  it("shows only the shape panel for a static indicator", () => {
    const html = renderApp(goldenState({ indicator: "Age" }), goldenData());
    expect(html).toContain('data-panel="shape"');
    expect(html).not.toContain('data-panel="transition"');
    expect(html).not.toContain('data-panel="development"');
  });

  it("adds the joint-effect heatmap in interaction mode", () => {
    const html = renderApp(
      goldenState({ mode: "interaction" }),
      goldenData(),
    );
    expect(html).toContain('data-panel="interaction"');
    const data = goldenData();
    const surface = data.bundle.data!.interaction_surfaces[0];
    expect(html).toContain(surface.features[0]);
    expect(html).toContain(surface.features[1]);
  });

  it("renders placeholders before anything is loaded", () => {
    const html = renderApp(
      normalizeState(initialState(), null, null),
      emptyData(),
    );
    expect(html).toContain("loading…");
    expect(html).not.toContain("error-banner");
  });
});
