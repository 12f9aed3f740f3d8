// String-based SVG construction. Rendering to plain markup keeps every
// view a pure function of its inputs, which is what makes the golden
// snapshots meaningful.

import { escapeHtml } from "./format.js";

export type AttrValue = string | number;

// geometry attributes are rounded for stable, readable markup; displayed
// text never goes through this path
function fmtAttr(value: AttrValue): string {
  if (typeof value === "number") {
    return String(Number(value.toFixed(2)));
  }
  return escapeHtml(value);
}

export function tag(
  name: string,
  attrs: Record<string, AttrValue>,
  children: string[] = [],
): string {
  let out = `<${name}`;
  for (const [key, value] of Object.entries(attrs)) {
    out += ` ${key}="${fmtAttr(value)}"`;
  }
  if (children.length === 0) {
    return `${out}/>`;
  }
  return `${out}>${children.join("")}</${name}>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  attrs: Record<string, AttrValue> = {},
): string {
  return tag("text", { x, y, ...attrs }, [escapeHtml(content)]);
}

export function polylinePoints(xs: number[], ys: number[]): string {
  const pts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    pts.push(`${Number(xs[i].toFixed(2))},${Number(ys[i].toFixed(2))}`);
  }
  return pts.join(" ");
}

export function svgRoot(width: number, height: number, children: string[]): string {
  return tag(
    "svg",
    {
      viewBox: `0 0 ${width} ${height}`,
      width,
      height,
      xmlns: "http://www.w3.org/2000/svg",
    },
    children,
  );
}
