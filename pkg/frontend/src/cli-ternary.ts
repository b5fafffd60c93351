#!/usr/bin/env node
/** render-ternary: trajectory CSVs (+ optional equilibria JSON) -> SVG portrait. */

import * as fs from "node:fs";
import { readEquilibriaJson, readTrajectoryCsv, requireTrajectoryMetadata } from "./data.js";
import { parseArgs } from "./cli-heatmap.js";
import { buildTernaryModel, renderTernarySvg } from "./ternary.js";

export function main(argv: string[]): number {
  try {
    const options = parseArgs(argv);
    if (!options["input"] || !options["output"]) {
      throw new Error(
        "usage: render-ternary --input traj.csv[,traj2.csv...] " +
        "[--equilibria eq.json] --output figure.svg",
      );
    }
    const inputs = options["input"].split(",");
    const trajectories = inputs.map((file) => {
      requireTrajectoryMetadata(file);
      return readTrajectoryCsv(file);
    });
    const equilibria = options["equilibria"] ? readEquilibriaJson(options["equilibria"]) : [];
    const model = buildTernaryModel(trajectories, equilibria, {
      sizePx: options["size-px"] ? Number(options["size-px"]) : undefined,
    });
    fs.writeFileSync(options["output"], renderTernarySvg(model));
    console.log(
      `wrote ${options["output"]} (${model.paths.length} trajectories, ` +
      `${model.markers.length} equilibria)`,
    );
    return 0;
  } catch (error) {
    console.error(`error: ${(error as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli-ternary.js")) {
  process.exit(main(process.argv.slice(2)));
}
