// View state and its invariants. normalizeState is the single place that
// reconciles what the user picked with what the loaded data can actually
// show: the selected indicator must exist in the bundle and the selected
// step can never pass the prediction point.

import type { InterpretationBundle, PatientListResponse } from "./types.js";

export type PlotMode = "shape" | "transition" | "development" | "interaction";

export const PLOT_MODES: PlotMode[] = [
  "shape",
  "transition",
  "development",
  "interaction",
];

export interface ViewState {
  patientId: string | null;
  indicator: string | null;
  step: number; // 1-based event step, <= bundle.prefix_len
  mode: PlotMode;
}

export function initialState(): ViewState {
  return { patientId: null, indicator: null, step: 1, mode: "shape" };
}

export interface IndicatorInfo {
  name: string;
  kind: "static" | "sequential";
  hasTransition: boolean;
}

export function indicatorCatalog(bundle: InterpretationBundle): IndicatorInfo[] {
  const out: IndicatorInfo[] = [];
  for (const shape of bundle.static_shapes) {
    out.push({ name: shape.feature, kind: "static", hasTransition: false });
  }
  for (const shape of bundle.sequential_shapes) {
    out.push({
      name: shape.feature,
      kind: "sequential",
      hasTransition: bundle.transitions.some((t) => t.feature === shape.feature),
    });
  }
  return out;
}

export function findIndicator(
  bundle: InterpretationBundle,
  name: string | null,
): IndicatorInfo | null {
  if (name === null) return null;
  return indicatorCatalog(bundle).find((i) => i.name === name) ?? null;
}

export function modeAvailable(
  mode: PlotMode,
  indicator: IndicatorInfo,
  bundle: InterpretationBundle,
): boolean {
  switch (mode) {
    case "shape":
      return true;
    case "transition":
      return indicator.hasTransition;
    case "development":
      return indicator.kind === "sequential";
    case "interaction":
      return bundle.interaction_surfaces.length > 0;
  }
}

// highest-ranked importance entry that is drillable, falling back to the
// first catalogued indicator
function defaultIndicator(bundle: InterpretationBundle): string | null {
  const catalog = indicatorCatalog(bundle);
  if (catalog.length === 0) return null;
  for (const entry of bundle.importances) {
    if (catalog.some((i) => i.name === entry.feature)) {
      return entry.feature;
    }
  }
  return catalog[0].name;
}

export function normalizeState(
  state: ViewState,
  listing: PatientListResponse | null,
  bundle: InterpretationBundle | null,
): ViewState {
  const next: ViewState = { ...state };

  if (listing && listing.patients.length > 0) {
    const known = listing.patients.some((p) => p.pathway_id === next.patientId);
    if (!known) {
      next.patientId = listing.patients[0].pathway_id;
    }
  }

  if (!bundle) {
    next.indicator = null;
    return next;
  }

  let indicator = findIndicator(bundle, next.indicator);
  if (!indicator) {
    next.indicator = defaultIndicator(bundle);
    indicator = findIndicator(bundle, next.indicator);
  }

  if (!Number.isFinite(next.step) || next.step < 1) {
    next.step = 1;
  }
  if (next.step > bundle.prefix_len) {
    next.step = bundle.prefix_len;
  }
  next.step = Math.trunc(next.step);

  if (indicator && !modeAvailable(next.mode, indicator, bundle)) {
    next.mode = "shape";
  }
  return next;
}
