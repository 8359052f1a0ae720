import { SweepRow } from "./schema.js";
import { Curve, Panel, PlotSpec } from "./svg.js";

export type FigureId = 1 | 2 | 3 | 4;

interface DirectionStyle {
  label: string;
  color: string;
  dash?: string;
  order: number;
}

/** Curve styles per teleportation direction (matching the usual palette). */
export const DIRECTION_STYLE: Record<string, DirectionStyle> = {
  p2c: { label: "p→c", color: "#1f4fd8", dash: "6 4", order: 0 },
  s2c: { label: "s→c", color: "#d62728", order: 1 },
  c2s: { label: "c→s", color: "#7d2a9e", dash: "8 3 2 3", order: 2 },
  c2p: { label: "c→p", color: "#8c5a2b", dash: "8 3 2 3 2 3", order: 3 },
};

const CLASSICAL_LIMIT = 2 / 3;

interface FigureKind {
  directions: string[];
  quantity: "avg_fidelity" | "success_probability";
  yLabel: string;
  referenceLine?: number;
  panelBy: "alpha" | "none";
}

export const FIGURES: Record<FigureId, FigureKind> = {
  1: {
    directions: ["s2c", "c2s"],
    quantity: "avg_fidelity",
    yLabel: "average fidelity",
    referenceLine: CLASSICAL_LIMIT,
    panelBy: "alpha",
  },
  2: {
    directions: ["c2s"],
    quantity: "success_probability",
    yLabel: "success probability",
    panelBy: "none",
  },
  3: {
    directions: ["p2c", "s2c", "c2s", "c2p"],
    quantity: "avg_fidelity",
    yLabel: "average fidelity",
    referenceLine: CLASSICAL_LIMIT,
    panelBy: "alpha",
  },
  4: {
    directions: ["p2c", "s2c", "c2s", "c2p"],
    quantity: "success_probability",
    yLabel: "success probability",
    panelBy: "alpha",
  },
};

function sortedUnique(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function curveFrom(rows: SweepRow[], quantity: FigureKind["quantity"],
                   style: DirectionStyle, label: string): Curve {
  const points = rows
    .slice()
    .sort((a, b) => a.r - b.r)
    .map((row) => [row.r, row[quantity]] as [number, number]);
  return { label, color: style.color, dash: style.dash, points };
}

/**
 * Group sweep rows into the panel/curve layout of one figure.
 *
 * Every row lands in exactly one panel; rows whose direction does not
 * belong to the figure are an error (loud, not silently dropped).
 */
export function buildFigure(figure: FigureId, rows: SweepRow[]): PlotSpec {
  const kind = FIGURES[figure];
  if (kind === undefined) {
    throw new Error(`figure id must be 1..4, got ${figure}`);
  }
  for (const row of rows) {
    if (!kind.directions.includes(row.direction)) {
      throw new Error(
        `figure ${figure} does not plot direction "${row.direction}"; ` +
        `expected one of ${kind.directions.join(", ")}`,
      );
    }
  }

  const alphas = sortedUnique(rows.map((row) => row.alpha));
  const panels: Panel[] = [];
  let consumed = 0;

  if (kind.panelBy === "alpha") {
    for (const alpha of alphas) {
      const curves: Curve[] = [];
      for (const direction of [...kind.directions].sort(
        (a, b) => DIRECTION_STYLE[a].order - DIRECTION_STYLE[b].order,
      )) {
        const subset = rows.filter((row) => row.alpha === alpha && row.direction === direction);
        if (subset.length === 0) continue;
        consumed += subset.length;
        curves.push(curveFrom(subset, kind.quantity, DIRECTION_STYLE[direction],
                              DIRECTION_STYLE[direction].label));
      }
      panels.push({ title: `α = ${alpha}`, curves, referenceLine: kind.referenceLine });
    }
  } else {
    const direction = kind.directions[0];
    const curves: Curve[] = [];
    for (const alpha of alphas) {
      const subset = rows.filter((row) => row.alpha === alpha && row.direction === direction);
      if (subset.length === 0) continue;
      consumed += subset.length;
      const style = DIRECTION_STYLE[direction];
      curves.push(curveFrom(subset, kind.quantity, style,
                            `${style.label}, α = ${alpha}`));
    }
    panels.push({ title: `${DIRECTION_STYLE[direction].label} success probability`,
                  curves, referenceLine: kind.referenceLine });
  }

  if (consumed !== rows.length) {
    throw new Error(`internal panel assignment lost rows: ${consumed} of ${rows.length}`);
  }

  const rMax = Math.max(...rows.map((row) => row.r));
  return {
    panels,
    columns: kind.panelBy === "alpha" ? 2 : 1,
    xLabel: "normalized time r",
    yLabel: kind.yLabel,
    xDomain: [0, Math.max(1, rMax)],
    yDomain: [0, 1],
  };
}
