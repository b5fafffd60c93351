/**
 * Cooperation-fraction heatmap over the (alpha, beta) plane.
 *
 * Each sweep cell becomes a colored rectangle; the three dotted rays from
 * the origin mark the orientation-category boundaries of the
 * non-participant motives.
 */

import { SweepGrid } from "./data.js";
import { colorScale, document as svgDocument, tag, text } from "./svg.js";

/** Orientation boundaries in degrees; rays are drawn from the origin. */
export const SVO_BOUNDARY_DEGREES = [57.15, 22.45, -12.04];

export interface HeatmapOptions {
  sizePx?: number;
  marginPx?: number;
}

export interface HeatmapCellBox {
  alpha: number;
  beta: number;
  xPx: number;
  yPx: number;
  widthPx: number;
  heightPx: number;
  color: string;
  fC: number;
}

export interface HeatmapModel {
  widthPx: number;
  heightPx: number;
  cells: HeatmapCellBox[];
  /** Ray endpoints in pixel coordinates, one per orientation boundary. */
  rays: { thetaDeg: number; x1: number; y1: number; x2: number; y2: number }[];
}

interface Scale {
  toX(alpha: number): number;
  toY(beta: number): number;
}

function makeScale(grid: SweepGrid, size: number, margin: number): Scale {
  const [alphaLo, alphaHi] = [grid.alphas[0], grid.alphas[grid.alphas.length - 1]];
  const [betaLo, betaHi] = [grid.betas[0], grid.betas[grid.betas.length - 1]];
  const span = size - 2 * margin;
  return {
    toX: (alpha) => margin + ((alpha - alphaLo) / (alphaHi - alphaLo)) * span,
    // SVG y grows downward; beta grows upward.
    toY: (beta) => size - margin - ((beta - betaLo) / (betaHi - betaLo)) * span,
  };
}

export function buildHeatmapModel(grid: SweepGrid, options: HeatmapOptions = {}): HeatmapModel {
  const size = options.sizePx ?? 560;
  const margin = options.marginPx ?? 50;
  const scale = makeScale(grid, size, margin);
  const stepAlpha = grid.alphas.length > 1 ? grid.alphas[1] - grid.alphas[0] : 1;
  const stepBeta = grid.betas.length > 1 ? grid.betas[1] - grid.betas[0] : 1;
  const cellWidth = Math.abs(scale.toX(stepAlpha) - scale.toX(0));
  const cellHeight = Math.abs(scale.toY(stepBeta) - scale.toY(0));

  const cells = grid.cells.map((cell) => ({
    alpha: cell.alpha,
    beta: cell.beta,
    xPx: scale.toX(cell.alpha) - cellWidth / 2,
    yPx: scale.toY(cell.beta) - cellHeight / 2,
    widthPx: cellWidth,
    heightPx: cellHeight,
    color: Number.isNaN(cell.fC) ? "rgb(128,128,128)" : colorScale(cell.fC),
    fC: cell.fC,
  }));

  const alphaMax = Math.max(Math.abs(grid.alphas[0]), Math.abs(grid.alphas[grid.alphas.length - 1]));
  const betaMax = Math.max(Math.abs(grid.betas[0]), Math.abs(grid.betas[grid.betas.length - 1]));
  const reach = Math.hypot(alphaMax, betaMax);
  const rays = SVO_BOUNDARY_DEGREES.map((thetaDeg) => {
    const theta = (thetaDeg * Math.PI) / 180;
    // Clip the ray to the data rectangle.
    const dirAlpha = Math.cos(theta);
    const dirBeta = Math.sin(theta);
    let limit = reach;
    if (dirAlpha !== 0) limit = Math.min(limit, alphaMax / Math.abs(dirAlpha));
    if (dirBeta !== 0) limit = Math.min(limit, betaMax / Math.abs(dirBeta));
    return {
      thetaDeg,
      x1: scale.toX(0),
      y1: scale.toY(0),
      x2: scale.toX(limit * dirAlpha),
      y2: scale.toY(limit * dirBeta),
    };
  });

  return { widthPx: size, heightPx: size, cells, rays };
}

export function renderHeatmapSvg(model: HeatmapModel): string {
  const children: string[] = [];
  children.push(tag("rect", {
    x: 0, y: 0, width: model.widthPx, height: model.heightPx, fill: "white",
  }));
  for (const cell of model.cells) {
    children.push(tag("rect", {
      x: cell.xPx.toFixed(2),
      y: cell.yPx.toFixed(2),
      width: cell.widthPx.toFixed(2),
      height: cell.heightPx.toFixed(2),
      fill: cell.color,
    }));
  }
  for (const ray of model.rays) {
    children.push(tag("line", {
      x1: ray.x1.toFixed(2),
      y1: ray.y1.toFixed(2),
      x2: ray.x2.toFixed(2),
      y2: ray.y2.toFixed(2),
      stroke: "white",
      "stroke-width": 1.5,
      "stroke-dasharray": "4 4",
    }));
  }
  const first = model.cells[0];
  const last = model.cells[model.cells.length - 1];
  children.push(text("alpha (outside payoff)", {
    x: model.widthPx / 2, y: model.heightPx - 8, "text-anchor": "middle",
    "font-family": "sans-serif", "font-size": 14,
  }));
  children.push(text("beta (influence)", {
    x: 14, y: model.heightPx / 2, "text-anchor": "middle",
    "font-family": "sans-serif", "font-size": 14,
    transform: `rotate(-90 14 ${model.heightPx / 2})`,
  }));
  children.push(text(`alpha: ${first.alpha} .. ${last.alpha}, beta: ${first.beta} .. ${last.beta}`, {
    x: model.widthPx / 2, y: 20, "text-anchor": "middle",
    "font-family": "sans-serif", "font-size": 12,
  }));
  // Compact color legend.
  const legendSteps = 40;
  for (let i = 0; i < legendSteps; i += 1) {
    const value = i / (legendSteps - 1);
    children.push(tag("rect", {
      x: model.widthPx - 24,
      y: (model.heightPx - 40) * (1 - value) + 30,
      width: 10,
      height: Math.ceil((model.heightPx - 40) / legendSteps),
      fill: colorScale(value),
    }));
  }
  children.push(text("F_C", {
    x: model.widthPx - 19, y: 20, "text-anchor": "middle",
    "font-family": "sans-serif", "font-size": 11,
  }));
  return svgDocument(model.widthPx, model.heightPx, children);
}
