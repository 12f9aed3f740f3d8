// Patient picker: one row per pathway with its prediction and urgency
// band, exactly as the listing endpoint reports them.

import { escapeHtml, show } from "../format.js";
import type { Panel } from "../store.js";
import type { PatientListResponse } from "../types.js";

export function renderPatientList(
  panel: Panel<PatientListResponse>,
  selectedId: string | null,
): string {
  const staleMark = panel.stale ? `<span class="stale-mark">stale</span>` : "";
  if (!panel.data) {
    return `<section class="panel patients"><h2>Patients${staleMark}</h2><p class="placeholder">loading…</p></section>`;
  }
  const rows = panel.data.patients
    .map((p) => {
      const selected = p.pathway_id === selectedId ? " selected" : "";
      const badge =
        p.urgency === null
          ? ""
          : `<span class="badge urgency-${escapeHtml(p.urgency)}">${escapeHtml(p.urgency)}</span>`;
      return (
        `<li class="patient-row${selected}">` +
        `<button type="button" data-action="select-patient" data-id="${escapeHtml(p.pathway_id)}">` +
        `<span class="pid">${escapeHtml(p.pathway_id)}</span>` +
        badge +
        `<span class="num">${show(p.prediction)}</span>` +
        `<span class="muted">events ${show(p.n_events)}</span>` +
        `</button></li>`
      );
    })
    .join("");
  return (
    `<section class="panel patients${panel.stale ? " stale" : ""}">` +
    `<h2>Patients${staleMark}</h2>` +
    `<ul class="patient-list">${rows}</ul>` +
    `</section>`
  );
}
