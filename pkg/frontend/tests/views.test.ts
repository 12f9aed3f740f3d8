// Individual panel behavior: the importance cap, urgency wording,
// non-blocking failure handling and the timeline's prediction horizon.

import { describe, expect, it } from "vitest";

import { renderApp } from "../src/app.js";
import { renderImportance } from "../src/views/importance.js";
import { renderTimeline } from "../src/views/timeline.js";
import { renderUrgency } from "../src/views/urgency.js";
import { DEFAULT_WORDING } from "../src/views/urgency.js";
import type { ImportanceResponse, PredictionResponse } from "../src/types.js";
import { clone, goldenData, goldenSet, goldenState } from "./helpers.js";

const g = goldenSet();

describe("importance panel", () => {
  it("lists at most 20 bars and keeps the API order", () => {
    const crowded: ImportanceResponse = {
      model_hash: "",
      task: "classification",
      importances: Array.from({ length: 25 }, (_, i) => ({
        feature: `ind_${String(i).padStart(2, "0")}`,
        kind: "static",
        score: 25 - i,
      })),
    };
    const html = renderImportance({ data: crowded, stale: false }, null);
    expect(html.match(/bar-row/g)?.length).toBe(20);
    expect(html).toContain("ind_19");
    expect(html).not.toContain("ind_20");
    // order preserved exactly as returned (descending scores)
    let last = -1;
    for (let i = 0; i < 20; i++) {
      const pos = html.indexOf(`ind_${String(i).padStart(2, "0")}`);
      expect(pos).toBeGreaterThan(last);
      last = pos;
    }
  });

  it("marks the selected indicator's bar", () => {
    const html = renderImportance(
      { data: g.importance, stale: false },
      g.importance.importances[1].feature,
    );
    expect(html).toContain("bar-row selected");
  });
});

describe("urgency banner", () => {
  it("shows the configured wording for the band plus the raw prediction", () => {
    const wording = { ...DEFAULT_WORDING, high: "Escalate to senior staff" };
    const html = renderUrgency({ data: g.prediction, stale: false }, wording);
    expect(g.prediction.urgency).toBe("high");
    expect(html).toContain("Escalate to senior staff");
    expect(html).toContain(String(g.prediction.prediction));
    expect(html).toContain(`urgency-high`);
  });

  it("switches wording with the band", () => {
    const low: PredictionResponse = { ...clone(g.prediction), urgency: "low" };
    const html = renderUrgency({ data: low, stale: false }, DEFAULT_WORDING);
    expect(html).toContain(DEFAULT_WORDING.low);
    expect(html).not.toContain(DEFAULT_WORDING.high);
  });

  it("falls back to neutral wording when there is no band", () => {
    const reg: PredictionResponse = { ...clone(g.prediction), urgency: null };
    const html = renderUrgency({ data: reg, stale: false }, DEFAULT_WORDING);
    expect(html).toContain(DEFAULT_WORDING.none);
    expect(html).not.toContain("badge");
  });
});

describe("failure handling", () => {
  it("shows a non-blocking banner and marks stale panels", () => {
    const data = goldenData();
    data.error = "connection refused";
    data.bundle = { ...data.bundle, stale: true };
    const html = renderApp(goldenState(), data);
    expect(html).toContain("error-banner");
    expect(html).toContain("connection refused");
    // the rest of the page still renders from the last good payloads
    expect(html).toContain("Indicator detail");
    expect(html).toContain(g.bundle.pathway_id);
    expect(html).toContain("stale-mark");
  });

  it("renders no banner while everything is healthy", () => {
    expect(renderApp(goldenState(), goldenData())).not.toContain("error-banner");
  });
});

describe("timeline", () => {
  it("greys out events after the prediction point", () => {
    const html = renderTimeline({ data: g.patient, stale: false }, 1);
    const beyond = g.patient.timeline.filter((e) => e.step > g.patient.prefix_len);
    expect(beyond.length).toBeGreaterThan(0);
    expect(html.match(/after-horizon/g)?.length).toBe(beyond.length);
  });

  it("highlights the selected step", () => {
    const html = renderTimeline({ data: g.patient, stale: false }, 3);
    expect(html).toContain('class="event current"');
  });
});
