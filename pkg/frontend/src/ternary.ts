/**
 * Ternary portraits: trajectories and equilibria of the three-strategy
 * dynamics projected into the cooperation / defection / abstention
 * triangle.  Stable equilibria are drawn filled, all others hollow.
 */

import { EquilibriumPoint, TrajectoryPoint } from "./data.js";
import { document as svgDocument, tag, text } from "./svg.js";

export interface Point {
  x: number;
  y: number;
}

export interface TriangleCorners {
  cooperation: Point;
  defection: Point;
  abstention: Point;
}

export interface TernaryOptions {
  sizePx?: number;
  marginPx?: number;
}

export interface TernaryModel {
  widthPx: number;
  heightPx: number;
  corners: TriangleCorners;
  paths: Point[][];
  markers: { point: Point; filled: boolean; kind: string; stability: string }[];
}

export function triangleCorners(size: number, margin: number): TriangleCorners {
  const side = size - 2 * margin;
  const height = (side * Math.sqrt(3)) / 2;
  const base = margin + (size - 2 * margin + height) / 2;
  return {
    cooperation: { x: size / 2, y: base - height },
    defection: { x: margin, y: base },
    abstention: { x: size - margin, y: base },
  };
}

/**
 * Barycentric projection: (x, y, z) -> x * C + y * D + z * N.
 *
 * The unit weights make each pure state land exactly on its corner.
 */
export function project(state: [number, number, number], corners: TriangleCorners): Point {
  const [x, y, z] = state;
  return {
    x: x * corners.cooperation.x + y * corners.defection.x + z * corners.abstention.x,
    y: x * corners.cooperation.y + y * corners.defection.y + z * corners.abstention.y,
  };
}

export function buildTernaryModel(
  trajectories: TrajectoryPoint[][],
  equilibria: EquilibriumPoint[],
  options: TernaryOptions = {},
): TernaryModel {
  const size = options.sizePx ?? 520;
  const margin = options.marginPx ?? 40;
  const corners = triangleCorners(size, margin);
  const paths = trajectories.map((points) =>
    points.map((p) => project([p.x, p.y, p.z], corners)),
  );
  const markers = equilibria.map((eq) => ({
    point: project(eq.location, corners),
    filled: eq.stability === "stable",
    kind: eq.kind,
    stability: eq.stability,
  }));
  return { widthPx: size, heightPx: size, corners, paths, markers };
}

export function renderTernarySvg(model: TernaryModel): string {
  const { corners } = model;
  const children: string[] = [];
  children.push(tag("rect", {
    x: 0, y: 0, width: model.widthPx, height: model.heightPx, fill: "white",
  }));
  const outline = [corners.cooperation, corners.defection, corners.abstention]
    .map((p) => `${p.x.toFixed(3)},${p.y.toFixed(3)}`)
    .join(" ");
  children.push(tag("polygon", {
    points: outline, fill: "none", stroke: "black", "stroke-width": 1.2,
  }));
  for (const path of model.paths) {
    const points = path.map((p) => `${p.x.toFixed(3)},${p.y.toFixed(3)}`).join(" ");
    children.push(tag("polyline", {
      points, fill: "none", stroke: "rgb(31,119,180)", "stroke-width": 1.0,
    }));
  }
  for (const marker of model.markers) {
    children.push(tag("circle", {
      cx: marker.point.x.toFixed(3),
      cy: marker.point.y.toFixed(3),
      r: 5,
      fill: marker.filled ? "black" : "white",
      stroke: "black",
      "stroke-width": 1.2,
    }));
  }
  const labels: [string, Point, number][] = [
    ["C", corners.cooperation, -10],
    ["D", corners.defection, 16],
    ["N", corners.abstention, 16],
  ];
  for (const [label, corner, offset] of labels) {
    children.push(text(label, {
      x: corner.x, y: corner.y + offset, "text-anchor": "middle",
      "font-family": "sans-serif", "font-size": 16,
    }));
  }
  return svgDocument(model.widthPx, model.heightPx, children);
}
