// Top-level page assembly: pure function of (view state, fetched data,
// wording config) to markup. The browser bootstrap in main.ts only wires
// events and fetches; everything visible is produced here.

import { escapeHtml } from "./format.js";
import type { ViewState } from "./state.js";
import type { AppData } from "./store.js";
import { renderContributions } from "./views/contributions.js";
import { renderDetail } from "./views/detail.js";
import { renderImportance } from "./views/importance.js";
import { renderPatientList } from "./views/patients.js";
import { renderTimeline } from "./views/timeline.js";
import { renderUrgency } from "./views/urgency.js";
import { DEFAULT_WORDING } from "./views/urgency.js";
import type { UrgencyWording } from "./views/urgency.js";

export interface DashboardConfig {
  title: string;
  wording: UrgencyWording;
}

export const DEFAULT_CONFIG: DashboardConfig = {
  title: "Patient pathway dashboard",
  wording: DEFAULT_WORDING,
};

function errorBanner(data: AppData): string {
  if (data.error === null) {
    return "";
  }
  // non-blocking: the rest of the page keeps rendering the last good data
  return (
    `<div class="error-banner" role="alert">API request failed: ` +
    `${escapeHtml(data.error)}<span class="muted"> — showing last loaded data</span></div>`
  );
}

export function renderApp(
  state: ViewState,
  data: AppData,
  config: DashboardConfig = DEFAULT_CONFIG,
): string {
  const hash = data.patients.data?.model_hash ?? data.bundle.data?.model_hash ?? "";
  const task = data.patients.data?.task ?? "";
  return (
    `<div class="dashboard">` +
    `<header><h1>${escapeHtml(config.title)}</h1></header>` +
    errorBanner(data) +
    `<div class="columns">` +
    `<div class="col side">` +
    renderPatientList(data.patients, state.patientId) +
    `</div>` +
    `<div class="col main">` +
    renderTimeline(data.patient, state.step) +
    renderUrgency(data.prediction, config.wording) +
    renderContributions(data.bundle, state.indicator) +
    `</div>` +
    `<div class="col side">` +
    renderImportance(data.importance, state.indicator) +
    `</div>` +
    `</div>` +
    renderDetail(data.bundle, state) +
    `<footer class="muted">` +
    (task ? `task ${escapeHtml(task)} · ` : "") +
    (hash ? `model <code>${escapeHtml(hash)}</code>` : "") +
    `</footer>` +
    `</div>`
  );
}
