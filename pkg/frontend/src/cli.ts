#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { buildFigure, FigureId } from "./figures.js";
import { parseSweepCsv } from "./schema.js";
import { renderSvg } from "./svg.js";

export function renderFigureFile(csvPaths: string[], figure: FigureId, outPath: string): number {
  const rows = csvPaths.flatMap((path) => parseSweepCsv(readFileSync(path, "utf-8")));
  const svg = renderSvg(buildFigure(figure, rows));
  writeFileSync(outPath, svg, "utf-8");
  return rows.length;
}

async function main(): Promise<void> {
  const argv = await yargs(hideBin(process.argv))
    .option("csv", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "sweep CSV path(s) produced by `hybridtele sweep`",
    })
    .option("figure", {
      type: "number",
      demandOption: true,
      choices: [1, 2, 3, 4],
      describe: "figure id",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .strict()
    .parse();

  try {
    const count = renderFigureFile(argv.csv, argv.figure as FigureId, argv.out);
    console.log(`rendered figure ${argv.figure} from ${count} rows -> ${argv.out}`);
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exitCode = 1;
  }
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("render-figures")) {
  void main();
}
