// Global indicator importance: at most 20 bars, in the order the API
// returns them (already sorted by descending score). Bar widths are
// geometry scaled to the top score; the printed score is the raw value.

import { escapeHtml, show } from "../format.js";
import type { Panel } from "../store.js";
import type { ImportanceResponse } from "../types.js";

export const MAX_BARS = 20;

export function renderImportance(
  panel: Panel<ImportanceResponse>,
  selectedIndicator: string | null,
): string {
  const staleMark = panel.stale ? `<span class="stale-mark">stale</span>` : "";
  if (!panel.data) {
    return `<section class="panel importance"><h2>Indicator importance${staleMark}</h2><p class="placeholder">loading…</p></section>`;
  }
  const entries = panel.data.importances.slice(0, MAX_BARS);
  const top = entries.length > 0 ? entries[0].score : 0;
  const bars = entries
    .map((entry) => {
      const width = top > 0 ? (entry.score / top) * 100 : 0;
      const selected = entry.feature === selectedIndicator ? " selected" : "";
      return (
        `<li class="bar-row${selected}">` +
        `<button type="button" data-action="select-indicator"` +
        ` data-name="${escapeHtml(entry.feature)}">` +
        `<span class="feature">${escapeHtml(entry.feature)}</span>` +
        `<span class="kind">${escapeHtml(entry.kind)}</span>` +
        `<span class="bar"><span class="fill" style="width:${width.toFixed(2)}%"></span></span>` +
        `<span class="num">${show(entry.score)}</span>` +
        `</button></li>`
      );
    })
    .join("");
  return (
    `<section class="panel importance${panel.stale ? " stale" : ""}">` +
    `<h2>Indicator importance${staleMark}</h2>` +
    `<ul class="importance-bars">${bars}</ul>` +
    `</section>`
  );
}
