/** The five chart kinds and their column contracts. */

import { Table, numericColumn } from "./csv";
import { closeFrame, legend, openFrame, polyline, rect } from "./svg";

export const KINDS = [
  "zeeman",
  "histogram",
  "rabi",
  "ramsey",
  "grover",
] as const;

export type Kind = (typeof KINDS)[number];

const PALETTE = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#7f7f7f",
];

function extent(values: number[], fallback: [number, number]): [number, number] {
  if (values.length === 0) {
    return fallback;
  }
  let lo = values[0];
  let hi = values[0];
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

/** Widen a degenerate domain so the scale never divides by zero. */
function ensureSpan([lo, hi]: [number, number]): [number, number] {
  if (hi > lo) {
    return [lo, hi];
  }
  const pad = Math.max(0.5, Math.abs(lo) * 0.05);
  return [lo - pad, hi + pad];
}

/** Five percent of headroom on both sides. */
function padded([lo, hi]: [number, number]): [number, number] {
  if (!(hi > lo)) {
    return ensureSpan([lo, hi]);
  }
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

interface Series {
  label: string;
  color: string;
  ys: number[];
}

function lineChart(
  xLabel: string,
  yLabel: string,
  xs: number[],
  series: Series[],
  legendWidth?: number
): string {
  const allY = series.flatMap((s) => s.ys);
  const frame = openFrame({
    x: { label: xLabel, domain: ensureSpan(extent(xs, [0, 1])) },
    y: { label: yLabel, domain: padded(extent(allY, [0, 1])) },
    legendWidth,
  });
  for (const s of series) {
    polyline(frame, xs, s.ys, s.color);
  }
  if (legendWidth !== undefined) {
    legend(frame, series);
  }
  return closeFrame(frame);
}

/** "e_jzp6_mip32_GHz" -> "Jz=+6, mI=+3/2"; anything else keeps its stem. */
function traceLabel(column: string): string {
  const m = /^e_jz([pm])(\d+)_mi([pm])(\d+)_GHz$/.exec(column);
  if (!m) {
    return column.slice(0, -"_GHz".length);
  }
  const jzSign = m[1] === "p" ? "+" : "-";
  const miSign = m[3] === "p" ? "+" : "-";
  const mi = `${m[4].slice(0, -1)}/${m[4].slice(-1)}`;
  return `Jz=${jzSign}${m[2]}, mI=${miSign}${mi}`;
}

function renderZeeman(table: Table): string {
  const xs = numericColumn(table, "field_mT");
  const traces = table.columns.filter((c) => c.endsWith("_GHz"));
  if (traces.length === 0) {
    throw new Error('no trace columns ending in "_GHz"');
  }
  const series = traces.map((name, i) => ({
    label: traceLabel(name),
    color: PALETTE[i % PALETTE.length],
    ys: numericColumn(table, name),
  }));
  return lineChart("field (mT)", "E/h (GHz)", xs, series, 150);
}

function renderHistogram(table: Table): string {
  const centers = numericColumn(table, "bin_center_mT");
  const counts = numericColumn(table, "count");
  let width = 1;
  let closest = Infinity;
  for (let i = 1; i < centers.length; i++) {
    const d = Math.abs(centers[i] - centers[i - 1]);
    if (d > 0 && d < closest) closest = d;
  }
  if (Number.isFinite(closest)) {
    width = closest;
  }
  const [cLo, cHi] = extent(centers, [0, 1]);
  const xDomain: [number, number] =
    centers.length > 0 ? [cLo - width, cHi + width] : [0, 1];
  const yDomain: [number, number] = [
    0,
    counts.length > 0 ? 1.05 * Math.max(...counts) : 1,
  ];
  const frame = openFrame({
    x: { label: "field (mT)", domain: ensureSpan(xDomain) },
    y: { label: "count", domain: ensureSpan(yDomain) },
  });
  const baseline = frame.yPix(0);
  centers.forEach((center, i) => {
    const xLo = frame.xPix(center - 0.45 * width);
    const xHi = frame.xPix(center + 0.45 * width);
    const yTop = frame.yPix(counts[i]);
    rect(frame, xLo, yTop, xHi - xLo, baseline - yTop, PALETTE[0]);
  });
  return closeFrame(frame);
}

function renderPopulationTrace(table: Table, color: string): string {
  const xs = numericColumn(table, "time_s");
  const ys = numericColumn(table, "population");
  return lineChart("time (s)", "population", xs, [
    { label: "population", color, ys },
  ]);
}

const GROVER_COLUMNS: [string, string][] = [
  ["population_p32", "+3/2"],
  ["population_p12", "+1/2"],
  ["population_m12", "-1/2"],
  ["population_m32", "-3/2"],
];

function renderGrover(table: Table): string {
  const xs = numericColumn(table, "time_s");
  const series = GROVER_COLUMNS.map(([column, label], i) => ({
    label,
    color: PALETTE[i],
    ys: numericColumn(table, column),
  }));
  return lineChart("time (s)", "population", xs, series, 70);
}

/** Render one table as a complete SVG document. */
export function render(kind: Kind, table: Table): string {
  switch (kind) {
    case "zeeman":
      return renderZeeman(table);
    case "histogram":
      return renderHistogram(table);
    case "rabi":
      return renderPopulationTrace(table, PALETTE[0]);
    case "ramsey":
      return renderPopulationTrace(table, PALETTE[2]);
    case "grover":
      return renderGrover(table);
  }
}
