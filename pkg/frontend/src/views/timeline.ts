// Pathway timeline with a step slider. Events past the prediction point
// (steps beyond prefix_len) are shown greyed out: they happened, but the
// model never saw them.

import { escapeHtml, show } from "../format.js";
import type { Panel } from "../store.js";
import type { PatientDetailResponse } from "../types.js";

export function renderTimeline(
  panel: Panel<PatientDetailResponse>,
  step: number,
): string {
  const staleMark = panel.stale ? `<span class="stale-mark">stale</span>` : "";
  if (!panel.data) {
    return `<section class="panel timeline"><h2>Timeline${staleMark}</h2><p class="placeholder">loading…</p></section>`;
  }
  const detail = panel.data;
  const events = detail.timeline
    .map((ev) => {
      const classes = ["event"];
      if (ev.step === step) classes.push("current");
      if (ev.step > detail.prefix_len) classes.push("after-horizon");
      return (
        `<li class="${classes.join(" ")}">` +
        `<span class="num step-no">${show(ev.step)}</span>` +
        `<span class="activity">${escapeHtml(ev.activity)}</span>` +
        `<span class="muted">${escapeHtml(ev.timestamp)}</span>` +
        `</li>`
      );
    })
    .join("");
  const statics = Object.entries(detail.static_values)
    .map(
      ([name, value]) =>
        `<li><span class="feature">${escapeHtml(name)}</span>` +
        `<span class="num">${show(value)}</span></li>`,
    )
    .join("");
  return (
    `<section class="panel timeline${panel.stale ? " stale" : ""}">` +
    `<h2>Timeline ${escapeHtml(detail.pathway_id)}${staleMark}</h2>` +
    `<label class="slider">step <span class="num">${show(step)}</span>` +
    ` of <span class="num">${show(detail.prefix_len)}</span>` +
    `<input type="range" min="1" max="${detail.prefix_len}" value="${step}"` +
    ` data-action="select-step"/></label>` +
    `<ol class="events">${events}</ol>` +
    `<h3>Static attributes</h3>` +
    `<ul class="statics">${statics}</ul>` +
    `</section>`
  );
}
