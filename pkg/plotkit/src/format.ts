/** Deterministic number strings for tick labels and pixel coordinates. */

/**
 * Labels for one axis's ticks.
 *
 * The notation (positional or exponential) is chosen once per axis from
 * the largest magnitude, so a single axis never mixes "8e-7" with
 * "0.000001". Float residue is rounded away: a tick computed as
 * 0.30000000000000004 is labeled "0.3".
 */
export function tickLabels(ticks: number[]): string[] {
  let maxAbs = 0;
  for (const t of ticks) {
    maxAbs = Math.max(maxAbs, Math.abs(t));
  }
  const exponential = maxAbs > 0 && (maxAbs < 1e-3 || maxAbs >= 1e6);
  return ticks.map((t) => {
    if (t === 0) {
      return "0";
    }
    if (exponential) {
      const [mantissa, exponent] = t.toExponential(6).split("e");
      return trimZeros(mantissa) + "e" + exponent.replace("+", "");
    }
    return trimZeros(t.toPrecision(8));
  });
}

function trimZeros(s: string): string {
  if (!s.includes(".")) {
    return s;
  }
  return s.replace(/0+$/, "").replace(/\.$/, "");
}

/** Pixel coordinate at fixed precision so output bytes never wander. */
export function fmtCoord(value: number): string {
  const s = value.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}
