/**
 * Readers for the simulator CLI's file formats.
 *
 * Sweep grids arrive as CSV with the header
 * `alpha,beta,F_C,regime,theta_deg,svo`, trajectories as `t,x,y,z`, and
 * both carry a `<stem>.meta.json` sidecar with the resolved run
 * configuration.  Equilibria come as JSON with the configuration embedded.
 */

import * as fs from "node:fs";
import * as path from "node:path";

export interface SweepCell {
  alpha: number;
  beta: number;
  fC: number;
  regime: string;
  thetaDeg: number;
  svo: string;
}

export interface SweepGrid {
  cells: SweepCell[];
  alphas: number[];
  betas: number[];
  meta: Record<string, unknown>;
}

export interface TrajectoryPoint {
  t: number;
  x: number;
  y: number;
  z: number;
}

export interface EquilibriumPoint {
  location: [number, number, number];
  kind: string;
  stability: string;
}

const SWEEP_COLUMNS = ["alpha", "beta", "F_C", "regime", "theta_deg", "svo"];
const TRAJECTORY_COLUMNS = ["t", "x", "y", "z"];

function splitCsv(text: string): string[][] {
  return text
    .split(/\r?\n/)
    .filter((line) => line.length > 0)
    .map((line) => line.split(","));
}

function checkHeader(header: string[], required: string[], file: string): void {
  for (const column of required) {
    if (!header.includes(column)) {
      throw new Error(`${file}: missing column '${column}' (header: ${header.join(",")})`);
    }
  }
}

/** Path of the metadata sidecar for a CSV artifact. */
export function metadataPath(csvPath: string): string {
  const parsed = path.parse(csvPath);
  const stem = parsed.ext === ".csv" ? path.join(parsed.dir, parsed.name) : csvPath;
  return `${stem}.meta.json`;
}

function readMetadata(csvPath: string): Record<string, unknown> {
  const sidecar = metadataPath(csvPath);
  if (!fs.existsSync(sidecar)) {
    throw new Error(`${csvPath}: missing metadata sidecar ${sidecar}`);
  }
  return JSON.parse(fs.readFileSync(sidecar, "utf-8"));
}

export function readSweepCsv(file: string): SweepGrid {
  const rows = splitCsv(fs.readFileSync(file, "utf-8"));
  checkHeader(rows[0], SWEEP_COLUMNS, file);
  const index = Object.fromEntries(rows[0].map((name, i) => [name, i]));
  const cells: SweepCell[] = rows.slice(1).map((row) => ({
    alpha: Number(row[index["alpha"]]),
    beta: Number(row[index["beta"]]),
    fC: Number(row[index["F_C"]]),
    regime: row[index["regime"]],
    thetaDeg: Number(row[index["theta_deg"]]),
    svo: row[index["svo"]],
  }));
  const alphas = [...new Set(cells.map((c) => c.alpha))].sort((a, b) => a - b);
  const betas = [...new Set(cells.map((c) => c.beta))].sort((a, b) => a - b);
  return { cells, alphas, betas, meta: readMetadata(file) };
}

/** Read one trajectory, rejecting rows that leave the simplex. */
export function readTrajectoryCsv(file: string, tolerance = 1e-9): TrajectoryPoint[] {
  const rows = splitCsv(fs.readFileSync(file, "utf-8"));
  checkHeader(rows[0], TRAJECTORY_COLUMNS, file);
  const index = Object.fromEntries(rows[0].map((name, i) => [name, i]));
  return rows.slice(1).map((row, rowIndex) => {
    const point = {
      t: Number(row[index["t"]]),
      x: Number(row[index["x"]]),
      y: Number(row[index["y"]]),
      z: Number(row[index["z"]]),
    };
    const total = point.x + point.y + point.z;
    if (
      !Number.isFinite(total) ||
      Math.abs(total - 1) > tolerance ||
      Math.min(point.x, point.y, point.z) < -tolerance
    ) {
      throw new Error(`${file}: row ${rowIndex + 1} is not a simplex state (${row.join(",")})`);
    }
    return point;
  });
}

export function requireTrajectoryMetadata(file: string): Record<string, unknown> {
  return readMetadata(file);
}

export function readEquilibriaJson(file: string): EquilibriumPoint[] {
  const doc = JSON.parse(fs.readFileSync(file, "utf-8"));
  const list = doc["equilibria"];
  if (!Array.isArray(list)) {
    throw new Error(`${file}: missing 'equilibria' array`);
  }
  return list.map((entry, i) => {
    if (!Array.isArray(entry.location) || entry.location.length !== 3) {
      throw new Error(`${file}: equilibrium ${i} has no 3-component location`);
    }
    return {
      location: entry.location as [number, number, number],
      kind: String(entry.kind),
      stability: String(entry.stability),
    };
  });
}
