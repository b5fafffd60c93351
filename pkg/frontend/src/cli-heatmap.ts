#!/usr/bin/env node
/** render-heatmap: sweep CSV (+ metadata sidecar) -> SVG color map. */

import * as fs from "node:fs";
import { readSweepCsv } from "./data.js";
import { buildHeatmapModel, renderHeatmapSvg } from "./heatmap.js";

export function parseArgs(argv: string[]): Record<string, string> {
  const options: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(`expected '--option value' pairs, got '${argv.join(" ")}'`);
    }
    options[key.slice(2)] = value;
  }
  return options;
}

export function main(argv: string[]): number {
  let options: Record<string, string>;
  try {
    options = parseArgs(argv);
    if (!options["input"] || !options["output"]) {
      throw new Error("usage: render-heatmap --input sweep.csv --output figure.svg [--size-px N]");
    }
    const grid = readSweepCsv(options["input"]);
    const model = buildHeatmapModel(grid, {
      sizePx: options["size-px"] ? Number(options["size-px"]) : undefined,
    });
    fs.writeFileSync(options["output"], renderHeatmapSvg(model));
    console.log(`wrote ${options["output"]} (${model.cells.length} cells)`);
    return 0;
  } catch (error) {
    console.error(`error: ${(error as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli-heatmap.js")) {
  process.exit(main(process.argv.slice(2)));
}
