/**
 * Minimal deterministic SVG line plots: fixed layout, fixed precision, no
 * randomness, so identical inputs yield identical bytes.
 */

export interface Curve {
  label: string;
  color: string;
  dash?: string;
  points: Array<[number, number]>;
}

export interface Panel {
  title: string;
  curves: Curve[];
  referenceLine?: number;
}

export interface PlotSpec {
  panels: Panel[];
  columns: number;
  xLabel: string;
  yLabel: string;
  xDomain: [number, number];
  yDomain: [number, number];
}

const PANEL_W = 340;
const PANEL_H = 250;
const MARGIN = { top: 34, right: 14, bottom: 42, left: 52 };
const GAP = 18;

const fmt = (v: number): string => v.toFixed(2);

function ticks(lo: number, hi: number, count: number): number[] {
  const out: number[] = [];
  for (let i = 0; i <= count; i += 1) {
    out.push(lo + ((hi - lo) * i) / count);
  }
  return out;
}

function renderPanel(panel: Panel, spec: PlotSpec, x0: number, y0: number): string {
  const innerW = PANEL_W - MARGIN.left - MARGIN.right;
  const innerH = PANEL_H - MARGIN.top - MARGIN.bottom;
  const [xLo, xHi] = spec.xDomain;
  const [yLo, yHi] = spec.yDomain;
  const sx = (x: number) => x0 + MARGIN.left + ((x - xLo) / (xHi - xLo)) * innerW;
  const sy = (y: number) => y0 + MARGIN.top + innerH - ((y - yLo) / (yHi - yLo)) * innerH;

  const parts: string[] = [];
  parts.push(`<g class="panel">`);
  parts.push(
    `<rect x="${fmt(x0 + MARGIN.left)}" y="${fmt(y0 + MARGIN.top)}" width="${fmt(innerW)}" ` +
    `height="${fmt(innerH)}" fill="none" stroke="#333" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${fmt(x0 + PANEL_W / 2)}" y="${fmt(y0 + 20)}" text-anchor="middle" ` +
    `font-size="13" font-family="sans-serif">${panel.title}</text>`,
  );

  for (const tx of ticks(xLo, xHi, 5)) {
    const px = sx(tx);
    parts.push(
      `<line x1="${fmt(px)}" y1="${fmt(y0 + MARGIN.top + innerH)}" x2="${fmt(px)}" ` +
      `y2="${fmt(y0 + MARGIN.top + innerH + 4)}" stroke="#333" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(px)}" y="${fmt(y0 + MARGIN.top + innerH + 16)}" text-anchor="middle" ` +
      `font-size="10" font-family="sans-serif">${tx.toFixed(1)}</text>`,
    );
  }
  for (const ty of ticks(yLo, yHi, 5)) {
    const py = sy(ty);
    parts.push(
      `<line x1="${fmt(x0 + MARGIN.left - 4)}" y1="${fmt(py)}" x2="${fmt(x0 + MARGIN.left)}" ` +
      `y2="${fmt(py)}" stroke="#333" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(x0 + MARGIN.left - 7)}" y="${fmt(py + 3)}" text-anchor="end" ` +
      `font-size="10" font-family="sans-serif">${ty.toFixed(1)}</text>`,
    );
  }
  parts.push(
    `<text x="${fmt(x0 + MARGIN.left + innerW / 2)}" y="${fmt(y0 + PANEL_H - 8)}" ` +
    `text-anchor="middle" font-size="12" font-family="sans-serif">${spec.xLabel}</text>`,
  );
  parts.push(
    `<text transform="translate(${fmt(x0 + 14)} ${fmt(y0 + MARGIN.top + innerH / 2)}) rotate(-90)" ` +
    `text-anchor="middle" font-size="12" font-family="sans-serif">${spec.yLabel}</text>`,
  );

  if (panel.referenceLine !== undefined) {
    const py = sy(panel.referenceLine);
    parts.push(
      `<line class="classical-limit" x1="${fmt(sx(xLo))}" y1="${fmt(py)}" ` +
      `x2="${fmt(sx(xHi))}" y2="${fmt(py)}" stroke="#444" stroke-width="1" ` +
      `stroke-dasharray="2 3"/>`,
    );
  }

  for (const curve of panel.curves) {
    const pts = curve.points
      .map(([x, y]) => `${fmt(sx(x))},${fmt(sy(y))}`)
      .join(" ");
    const dash = curve.dash ? ` stroke-dasharray="${curve.dash}"` : "";
    parts.push(
      `<polyline class="curve" data-label="${curve.label}" points="${pts}" fill="none" ` +
      `stroke="${curve.color}" stroke-width="1.6"${dash}/>`,
    );
  }

  // per-panel legend, upper right inside the frame
  let ly = y0 + MARGIN.top + 14;
  for (const curve of panel.curves) {
    const lx = x0 + MARGIN.left + innerW - 86;
    const dash = curve.dash ? ` stroke-dasharray="${curve.dash}"` : "";
    parts.push(
      `<line x1="${fmt(lx)}" y1="${fmt(ly - 4)}" x2="${fmt(lx + 24)}" y2="${fmt(ly - 4)}" ` +
      `stroke="${curve.color}" stroke-width="1.6"${dash}/>`,
    );
    parts.push(
      `<text x="${fmt(lx + 30)}" y="${fmt(ly)}" font-size="11" ` +
      `font-family="sans-serif">${curve.label}</text>`,
    );
    ly += 14;
  }
  parts.push("</g>");
  return parts.join("\n");
}

export function renderSvg(spec: PlotSpec): string {
  const rows = Math.ceil(spec.panels.length / spec.columns);
  const width = spec.columns * PANEL_W + (spec.columns - 1) * GAP;
  const height = rows * PANEL_H + (rows - 1) * GAP;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  spec.panels.forEach((panel, i) => {
    const col = i % spec.columns;
    const row = Math.floor(i / spec.columns);
    parts.push(renderPanel(panel, spec, col * (PANEL_W + GAP), row * (PANEL_H + GAP)));
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
