// Indicator drill-down. A sequential indicator shows its shape, transition
// and development panels side by side; a static indicator only has a shape.
// The interaction mode swaps in the joint-effect heatmap. Every printed
// number is a bundle value; the SVG coordinates are the only thing computed
// here.

import { divergingColor, symmetricMax } from "../color.js";
import { escapeHtml, show } from "../format.js";
import { extent, linearScale } from "../scale.js";
import { polylinePoints, svgRoot, tag, text } from "../svg.js";
import type { Panel } from "../store.js";
import { PLOT_MODES, findIndicator, modeAvailable } from "../state.js";
import type { PlotMode, ViewState } from "../state.js";
import type {
  InteractionSurface,
  InterpretationBundle,
  TransitionGrid,
} from "../types.js";

const W = 340;
const H = 190;
const M = { left: 52, right: 10, top: 10, bottom: 26 };

interface Series {
  values: number[];
  cls: string;
}

function linePlot(
  grid: number[],
  series: Series[],
  observed: { x: number; y: number } | null,
): string {
  const all = series.flatMap((s) => s.values);
  if (observed) all.push(observed.y);
  const [xLo, xHi] = extent(grid);
  const [yLo, yHi] = extent(all);
  const sx = linearScale(xLo, xHi, M.left, W - M.right);
  const sy = linearScale(yLo, yHi, H - M.bottom, M.top);

  const children: string[] = [
    tag("rect", {
      x: M.left,
      y: M.top,
      width: W - M.left - M.right,
      height: H - M.top - M.bottom,
      class: "plot-bg",
    }),
  ];
  for (const s of series) {
    children.push(
      tag("polyline", {
        points: polylinePoints(grid.map(sx), s.values.map(sy)),
        class: `line ${s.cls}`,
        fill: "none",
      }),
    );
    if (grid.length <= 2) {
      for (let i = 0; i < grid.length; i++) {
        children.push(
          tag("circle", { cx: sx(grid[i]), cy: sy(s.values[i]), r: 3, class: `pt ${s.cls}` }),
        );
      }
    }
  }
  if (observed) {
    children.push(
      tag("circle", {
        cx: sx(observed.x),
        cy: sy(observed.y),
        r: 4,
        class: "observed",
      }, [tag("title", {}, [escapeHtml(`observed ${show(observed.x)}: ${show(observed.y)}`)])]),
    );
  }
  children.push(
    text(M.left - 4, M.top + 4, show(yHi), { "text-anchor": "end", class: "tick" }),
    text(M.left - 4, H - M.bottom, show(yLo), { "text-anchor": "end", class: "tick" }),
    text(M.left, H - M.bottom + 14, show(xLo), { "text-anchor": "start", class: "tick" }),
    text(W - M.right, H - M.bottom + 14, show(xHi), { "text-anchor": "end", class: "tick" }),
  );
  return svgRoot(W, H, children);
}

function stepPlot(steps: number[], values: number[], selectedStep: number): string {
  const [xLo, xHi] = extent(steps);
  const [yLo, yHi] = extent(values);
  const sx = linearScale(xLo, xHi, M.left, W - M.right);
  const sy = linearScale(yLo, yHi, H - M.bottom, M.top);
  const children: string[] = [
    tag("rect", {
      x: M.left,
      y: M.top,
      width: W - M.left - M.right,
      height: H - M.top - M.bottom,
      class: "plot-bg",
    }),
    tag("polyline", {
      points: polylinePoints(steps.map(sx), values.map(sy)),
      class: "line patient",
      fill: "none",
    }),
  ];
  for (let i = 0; i < steps.length; i++) {
    const sel = steps[i] === selectedStep;
    if (sel) {
      children.push(
        tag("line", {
          x1: sx(steps[i]),
          x2: sx(steps[i]),
          y1: M.top,
          y2: H - M.bottom,
          class: "guide",
        }),
      );
    }
    children.push(
      tag(
        "circle",
        {
          cx: sx(steps[i]),
          cy: sy(values[i]),
          r: sel ? 5 : 3,
          class: sel ? "pt sel" : "pt",
        },
        [tag("title", {}, [escapeHtml(`step ${show(steps[i])}: ${show(values[i])}`)])],
      ),
    );
  }
  children.push(
    text(M.left - 4, M.top + 4, show(yHi), { "text-anchor": "end", class: "tick" }),
    text(M.left - 4, H - M.bottom, show(yLo), { "text-anchor": "end", class: "tick" }),
    text(M.left, H - M.bottom + 14, show(xLo), { "text-anchor": "start", class: "tick" }),
    text(W - M.right, H - M.bottom + 14, show(xHi), { "text-anchor": "end", class: "tick" }),
  );
  return svgRoot(W, H, children);
}

function heatmap(
  grid: number[],
  matrix: number[][],
  rowAxis: string,
  colAxis: string,
  cellTitle: (i: number, j: number) => string,
): string {
  const n = grid.length;
  const side = H - M.top - M.bottom;
  const cell = side / n;
  const absMax = symmetricMax(matrix);
  const children: string[] = [];
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      children.push(
        tag(
          "rect",
          {
            x: M.left + j * cell,
            y: M.top + i * cell,
            width: cell,
            height: cell,
            fill: divergingColor(matrix[i][j], absMax),
            class: "cell",
          },
          [tag("title", {}, [escapeHtml(cellTitle(i, j))])],
        ),
      );
    }
  }
  let lo = matrix[0][0];
  let hi = matrix[0][0];
  for (const row of matrix) {
    const [rLo, rHi] = extent(row);
    if (rLo < lo) lo = rLo;
    if (rHi > hi) hi = rHi;
  }
  const legendX = M.left + side + 16;
  children.push(
    text(M.left - 4, M.top + 8, show(grid[0]), { "text-anchor": "end", class: "tick" }),
    text(M.left - 4, M.top + side, show(grid[n - 1]), { "text-anchor": "end", class: "tick" }),
    text(M.left, M.top + side + 14, show(grid[0]), { "text-anchor": "start", class: "tick" }),
    text(M.left + side, M.top + side + 14, show(grid[n - 1]), { "text-anchor": "end", class: "tick" }),
    text(M.left + side / 2, H - 2, colAxis, { "text-anchor": "middle", class: "axis" }),
    tag("g", { transform: `rotate(-90 12 ${M.top + side / 2})` }, [
      text(12, M.top + side / 2, rowAxis, { "text-anchor": "middle", class: "axis" }),
    ]),
    tag("rect", { x: legendX, y: M.top, width: 12, height: 12, fill: divergingColor(hi, absMax) }),
    text(legendX + 16, M.top + 10, show(hi), { class: "tick" }),
    tag("rect", { x: legendX, y: M.top + side - 12, width: 12, height: 12, fill: divergingColor(lo, absMax) }),
    text(legendX + 16, M.top + side - 2, show(lo), { class: "tick" }),
  );
  return svgRoot(W, H, children);
}

function panelBlock(key: string, focused: boolean, title: string, body: string): string {
  return (
    `<figure class="plot${focused ? " focus" : ""}" data-panel="${escapeHtml(key)}">` +
    `<figcaption>${title}</figcaption>${body}</figure>`
  );
}

function transitionFor(bundle: InterpretationBundle, name: string): TransitionGrid | null {
  return bundle.transitions.find((t) => t.feature === name) ?? null;
}

function surfaceFor(bundle: InterpretationBundle, name: string | null): InteractionSurface | null {
  if (bundle.interaction_surfaces.length === 0) return null;
  const own = bundle.interaction_surfaces.find((s) => name !== null && s.features.includes(name));
  return own ?? bundle.interaction_surfaces[0];
}

function modeButtons(
  bundle: InterpretationBundle,
  state: ViewState,
): string {
  const indicator = findIndicator(bundle, state.indicator);
  if (!indicator) return "";
  const buttons = PLOT_MODES.map((mode: PlotMode) => {
    const enabled = modeAvailable(mode, indicator, bundle);
    const active = mode === state.mode ? " active" : "";
    const dis = enabled ? "" : " disabled";
    return (
      `<button type="button" class="mode${active}"${dis}` +
      ` data-action="select-mode" data-mode="${mode}">${mode}</button>`
    );
  });
  return `<nav class="modes">${buttons.join("")}</nav>`;
}

export function renderDetail(
  panel: Panel<InterpretationBundle>,
  state: ViewState,
): string {
  const staleMark = panel.stale ? `<span class="stale-mark">stale</span>` : "";
  if (!panel.data) {
    return `<section class="panel detail"><h2>Indicator detail${staleMark}</h2><p class="placeholder">loading…</p></section>`;
  }
  const bundle = panel.data;
  const indicator = findIndicator(bundle, state.indicator);
  if (!indicator) {
    return `<section class="panel detail"><h2>Indicator detail${staleMark}</h2><p class="placeholder">no indicator selected</p></section>`;
  }

  const blocks: string[] = [];
  if (indicator.kind === "static") {
    const shape = bundle.static_shapes.find((s) => s.feature === indicator.name);
    const contrib = bundle.contributions.static.find((c) => c.feature === indicator.name);
    if (shape) {
      blocks.push(
        panelBlock(
          "shape",
          state.mode === "shape",
          `Shape of ${escapeHtml(shape.feature)}`,
          linePlot(
            shape.grid,
            [{ values: shape.effect, cls: "patient" }],
            contrib ? { x: contrib.value, y: contrib.effect } : null,
          ) +
            (contrib
              ? `<p class="readout">value <span class="num">${show(contrib.value)}</span>` +
                ` effect <span class="num">${show(contrib.effect)}</span></p>`
              : ""),
        ),
      );
    }
  } else {
    const shape = bundle.sequential_shapes.find((s) => s.feature === indicator.name);
    const contrib = bundle.contributions.sequential.find((c) => c.feature === indicator.name);
    if (shape) {
      const series: Series[] = [{ values: shape.effect, cls: "patient" }];
      if (shape.mean_effect) {
        series.push({ values: shape.mean_effect, cls: "cohort" });
      }
      blocks.push(
        panelBlock(
          "shape",
          state.mode === "shape",
          `Shape of ${escapeHtml(shape.feature)} at step <span class="num">${show(shape.t)}</span>`,
          linePlot(
            shape.grid,
            series,
            contrib ? { x: shape.observed, y: contrib.effect } : null,
          ) +
            `<p class="readout">observed <span class="num">${show(shape.observed)}</span>` +
            (contrib ? ` effect <span class="num">${show(contrib.effect)}</span>` : "") +
            `</p>` +
            (shape.mean_effect
              ? `<p class="legend"><span class="swatch patient"></span>this patient` +
                ` <span class="swatch cohort"></span>cohort mean</p>`
              : ""),
        ),
      );
    }
    const trans = transitionFor(bundle, indicator.name);
    if (trans) {
      blocks.push(
        panelBlock(
          "transition",
          state.mode === "transition",
          `Transition of ${escapeHtml(trans.feature)} at step <span class="num">${show(trans.t)}</span>`,
          heatmap(
            trans.grid,
            trans.delta,
            "previous value",
            "current value",
            (i, j) =>
              `from ${show(trans.grid[i])} to ${show(trans.grid[j])}: ${show(trans.delta[i][j])}`,
          ),
        ),
      );
    }
    const dev = bundle.developments.find((d) => d.feature === indicator.name);
    if (dev) {
      const tsFirst = bundle.timeline[dev.steps[0] - 1];
      const tsLast = bundle.timeline[dev.steps[dev.steps.length - 1] - 1];
      blocks.push(
        panelBlock(
          "development",
          state.mode === "development",
          `Development of ${escapeHtml(dev.feature)}`,
          stepPlot(dev.steps, dev.effect, state.step) +
            (tsFirst && tsLast
              ? `<p class="muted">${escapeHtml(tsFirst[1])} … ${escapeHtml(tsLast[1])}</p>`
              : ""),
        ),
      );
    }
  }

  if (state.mode === "interaction") {
    const surface = surfaceFor(bundle, indicator.name);
    if (surface) {
      blocks.push(
        panelBlock(
          "interaction",
          true,
          `Joint effect of ${escapeHtml(surface.features[0])} and ` +
            `${escapeHtml(surface.features[1])} at step <span class="num">${show(surface.t)}</span>`,
          heatmap(
            surface.grid,
            surface.effect,
            surface.features[0],
            surface.features[1],
            (i, j) =>
              `${surface.features[0]} ${show(surface.grid[i])}, ` +
              `${surface.features[1]} ${show(surface.grid[j])}: ${show(surface.effect[i][j])}`,
          ),
        ),
      );
    }
  }

  return (
    `<section class="panel detail${panel.stale ? " stale" : ""}">` +
    `<h2>Indicator detail: ${escapeHtml(indicator.name)}${staleMark}</h2>` +
    modeButtons(bundle, state) +
    `<div class="plots">${blocks.join("")}</div>` +
    `</section>`
  );
}
