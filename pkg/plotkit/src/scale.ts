/** Linear axis mapping and tick placement. */

/** Affine map from a data domain onto a pixel range. */
export function scaleLinear(
  d0: number,
  d1: number,
  r0: number,
  r1: number
): (value: number) => number {
  const span = d1 - d0;
  return (value) => r0 + ((value - d0) / span) * (r1 - r0);
}

/**
 * Tick positions on a 1-2-5 grid, all inside [lo, hi].
 *
 * `target` is the rough tick count; the step is the smallest of
 * 1, 2, 5 times a power of ten that keeps the count at or below it.
 */
export function niceTicks(lo: number, hi: number, target: number): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const raw = (hi - lo) / Math.max(1, target);
  const base = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = 10 * base;
  for (const mult of [1, 2, 5]) {
    if (mult * base >= raw) {
      step = mult * base;
      break;
    }
  }
  const first = Math.ceil(lo / step - 1e-9);
  const last = Math.floor(hi / step + 1e-9);
  const ticks: number[] = [];
  for (let i = first; i <= last; i++) {
    ticks.push(i * step);
  }
  return ticks;
}
