// Urgency banner. The band itself comes from the prediction endpoint; the
// wording attached to each band is deployment configuration, not data.

import { escapeHtml, show } from "../format.js";
import type { Panel } from "../store.js";
import type { PredictionResponse } from "../types.js";

export interface UrgencyWording {
  low: string;
  elevated: string;
  high: string;
  none: string;
}

export const DEFAULT_WORDING: UrgencyWording = {
  low: "Low urgency",
  elevated: "Elevated urgency",
  high: "High urgency",
  none: "Model score",
};

function wordingFor(band: string | null, wording: UrgencyWording): string {
  if (band === "low") return wording.low;
  if (band === "elevated") return wording.elevated;
  if (band === "high") return wording.high;
  return wording.none;
}

export function renderUrgency(
  panel: Panel<PredictionResponse>,
  wording: UrgencyWording,
): string {
  const staleMark = panel.stale ? `<span class="stale-mark">stale</span>` : "";
  if (!panel.data) {
    return `<section class="panel urgency"><h2>Prediction${staleMark}</h2><p class="placeholder">loading…</p></section>`;
  }
  const pred = panel.data;
  const band = pred.urgency;
  const bandClass = band === null ? "none" : escapeHtml(band);
  const bandTag =
    band === null ? "" : `<span class="badge urgency-${escapeHtml(band)}">${escapeHtml(band)}</span>`;
  return (
    `<section class="panel urgency${panel.stale ? " stale" : ""}">` +
    `<h2>Prediction${staleMark}</h2>` +
    `<div class="banner urgency-${bandClass}">` +
    `<span class="wording">${escapeHtml(wordingFor(band, wording))}</span>` +
    bandTag +
    `<span class="num prediction">${show(pred.prediction)}</span>` +
    `</div>` +
    `<p class="muted">after <span class="num">${show(pred.prefix_len)}</span> events</p>` +
    `</section>`
  );
}
