/**
 * Hand-assembled SVG output.
 *
 * Fixed layout, fixed-precision coordinates, no timestamps: the same
 * table always serializes to the same bytes.
 */

import { fmtCoord, tickLabels } from "./format";
import { niceTicks, scaleLinear } from "./scale";

export const WIDTH = 640;
export const HEIGHT = 400;

export interface AxisSpec {
  label: string;
  domain: [number, number];
}

export interface FrameSpec {
  x: AxisSpec;
  y: AxisSpec;
  /** Extra right margin reserved for a legend block. */
  legendWidth?: number;
}

export interface Frame {
  parts: string[];
  left: number;
  right: number;
  top: number;
  bottom: number;
  xPix: (value: number) => number;
  yPix: (value: number) => number;
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Open an SVG document and draw the grid, axes and labels. */
export function openFrame(spec: FrameSpec): Frame {
  const left = 64;
  const top = 16;
  const bottom = HEIGHT - 46;
  const right = WIDTH - 20 - (spec.legendWidth ?? 0);
  const [x0, x1] = spec.x.domain;
  const [y0, y1] = spec.y.domain;
  const xPix = scaleLinear(x0, x1, left, right);
  const yPix = scaleLinear(y0, y1, bottom, top);
  const xTicks = niceTicks(x0, x1, 6);
  const yTicks = niceTicks(y0, y1, 5);
  const xLabels = tickLabels(xTicks);
  const yLabels = tickLabels(yTicks);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif" ` +
      `font-size="12">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  for (const t of xTicks) {
    const x = fmtCoord(xPix(t));
    parts.push(
      `<line x1="${x}" y1="${top}" x2="${x}" y2="${bottom}" stroke="#e6e6e6"/>`
    );
  }
  for (const t of yTicks) {
    const y = fmtCoord(yPix(t));
    parts.push(
      `<line x1="${left}" y1="${y}" x2="${right}" y2="${y}" stroke="#e6e6e6"/>`
    );
  }
  parts.push(
    `<rect x="${left}" y="${top}" width="${right - left}" ` +
      `height="${bottom - top}" fill="none" stroke="#444444"/>`
  );
  xTicks.forEach((t, i) => {
    const x = fmtCoord(xPix(t));
    parts.push(
      `<line x1="${x}" y1="${bottom}" x2="${x}" y2="${bottom + 4}" stroke="#444444"/>`
    );
    parts.push(
      `<text x="${x}" y="${bottom + 17}" text-anchor="middle">` +
        `${escapeXml(xLabels[i])}</text>`
    );
  });
  yTicks.forEach((t, i) => {
    const y = fmtCoord(yPix(t));
    parts.push(
      `<line x1="${left - 4}" y1="${y}" x2="${left}" y2="${y}" stroke="#444444"/>`
    );
    parts.push(
      `<text x="${left - 7}" y="${fmtCoord(yPix(t) + 4)}" text-anchor="end">` +
        `${escapeXml(yLabels[i])}</text>`
    );
  });
  const xMid = fmtCoord((left + right) / 2);
  parts.push(
    `<text x="${xMid}" y="${HEIGHT - 10}" text-anchor="middle">` +
      `${escapeXml(spec.x.label)}</text>`
  );
  const yMid = fmtCoord((top + bottom) / 2);
  parts.push(
    `<text x="14" y="${yMid}" text-anchor="middle" ` +
      `transform="rotate(-90 14 ${yMid})">${escapeXml(spec.y.label)}</text>`
  );
  return { parts, left, right, top, bottom, xPix, yPix };
}

/** One data series as a polyline (a lone point becomes a dot). */
export function polyline(
  frame: Frame,
  xs: number[],
  ys: number[],
  color: string
): void {
  if (xs.length === 0) {
    return;
  }
  if (xs.length === 1) {
    frame.parts.push(
      `<circle cx="${fmtCoord(frame.xPix(xs[0]))}" ` +
        `cy="${fmtCoord(frame.yPix(ys[0]))}" r="2.5" fill="${color}"/>`
    );
    return;
  }
  const points = xs
    .map((x, i) => `${fmtCoord(frame.xPix(x))},${fmtCoord(frame.yPix(ys[i]))}`)
    .join(" ");
  frame.parts.push(
    `<polyline points="${points}" fill="none" stroke="${color}" stroke-width="1.5"/>`
  );
}

/** Filled rectangle in pixel coordinates. */
export function rect(
  frame: Frame,
  x: number,
  y: number,
  w: number,
  h: number,
  color: string
): void {
  frame.parts.push(
    `<rect x="${fmtCoord(x)}" y="${fmtCoord(y)}" width="${fmtCoord(w)}" ` +
      `height="${fmtCoord(h)}" fill="${color}"/>`
  );
}

/** Swatch-and-label rows in the reserved right margin. */
export function legend(
  frame: Frame,
  entries: { label: string; color: string }[]
): void {
  const x = frame.right + 12;
  entries.forEach((entry, i) => {
    const y = frame.top + 10 + i * 16;
    frame.parts.push(
      `<line x1="${x}" y1="${y}" x2="${x + 18}" y2="${y}" ` +
        `stroke="${entry.color}" stroke-width="2"/>`
    );
    frame.parts.push(
      `<text x="${x + 24}" y="${y + 4}">${escapeXml(entry.label)}</text>`
    );
  });
}

export function closeFrame(frame: Frame): string {
  frame.parts.push("</svg>");
  return frame.parts.join("\n") + "\n";
}
