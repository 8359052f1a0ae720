export { parseSweepCsv, REQUIRED_COLUMNS } from "./schema.js";
export type { SweepRow } from "./schema.js";
export { buildFigure, DIRECTION_STYLE, FIGURES } from "./figures.js";
export type { FigureId } from "./figures.js";
export { renderSvg } from "./svg.js";
export type { Curve, Panel, PlotSpec } from "./svg.js";
export { renderFigureFile } from "./cli.js";
