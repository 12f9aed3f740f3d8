// Affine domain-to-pixel mapping. These numbers drive geometry only
// (coordinates, widths); text labels always come from the data itself.

export type Scale = (value: number) => number;

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  if (d0 === d1) {
    // flat domain: park everything at the middle of the range
    const mid = (r0 + r1) / 2;
    return () => mid;
  }
  const slope = (r1 - r0) / (d1 - d0);
  return (value: number) => r0 + (value - d0) * slope;
}

// min and max are selections, not arithmetic: the result is always a
// member of the input
export function extent(values: number[]): [number, number] {
  let lo = values[0];
  let hi = values[0];
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}
