// Diverging blue-white-red scale for effect heatmaps. The range is
// symmetric around zero so equal magnitudes get equal saturation and zero
// is always white, regardless of how lopsided the data is.

const NEG = [33, 102, 172]; // blue end
const POS = [178, 24, 43]; // red end
const MID = [255, 255, 255];

function mix(from: number[], to: number[], t: number): string {
  const c = from.map((f, i) => Math.round(f + (to[i] - f) * t));
  return `rgb(${c[0]}, ${c[1]}, ${c[2]})`;
}

export function divergingColor(value: number, absMax: number): string {
  if (absMax <= 0 || value === 0) {
    return mix(MID, MID, 0);
  }
  const t = Math.min(Math.abs(value) / absMax, 1);
  return value < 0 ? mix(MID, NEG, t) : mix(MID, POS, t);
}

export function symmetricMax(matrix: number[][]): number {
  let m = 0;
  for (const row of matrix) {
    for (const v of row) {
      const a = Math.abs(v);
      if (a > m) m = a;
    }
  }
  return m;
}
