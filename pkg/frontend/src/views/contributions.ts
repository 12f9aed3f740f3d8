// Additive decomposition readout: the bias plus every per-indicator effect
// for this patient, exactly as the bundle reports them. Clicking a row
// selects that indicator for the detail panels.

import { escapeHtml, show } from "../format.js";
import type { Panel } from "../store.js";
import type { InterpretationBundle } from "../types.js";

export function renderContributions(
  panel: Panel<InterpretationBundle>,
  selectedIndicator: string | null,
): string {
  const staleMark = panel.stale ? `<span class="stale-mark">stale</span>` : "";
  if (!panel.data) {
    return `<section class="panel contributions"><h2>Contributions${staleMark}</h2><p class="placeholder">loading…</p></section>`;
  }
  const bundle = panel.data;
  const row = (feature: string, effect: number, value: number | null) => {
    const selected = feature === selectedIndicator ? " selected" : "";
    return (
      `<li class="contrib-row${selected}">` +
      `<button type="button" data-action="select-indicator"` +
      ` data-name="${escapeHtml(feature)}">` +
      `<span class="feature">${escapeHtml(feature)}</span>` +
      (value === null ? "" : `<span class="muted num">${show(value)}</span>`) +
      `<span class="num">${show(effect)}</span>` +
      `</button></li>`
    );
  };
  const staticRows = bundle.contributions.static.map((c) =>
    row(c.feature, c.effect, c.value),
  );
  const seqRows = bundle.contributions.sequential.map((c) =>
    row(c.feature, c.effect, null),
  );
  return (
    `<section class="panel contributions${panel.stale ? " stale" : ""}">` +
    `<h2>Contributions${staleMark}</h2>` +
    `<p class="muted">bias <span class="num">${show(bundle.bias)}</span>` +
    ` logit <span class="num">${show(bundle.logit)}</span></p>` +
    `<ul class="contrib-list">${staticRows.join("")}${seqRows.join("")}</ul>` +
    `</section>`
  );
}
