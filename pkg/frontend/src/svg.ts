/** Minimal SVG string assembly, enough for static figures. */

export type Attrs = Record<string, string | number>;

export function tag(name: string, attrs: Attrs, children: string[] = []): string {
  const rendered = Object.entries(attrs)
    .map(([key, value]) => `${key}="${value}"`)
    .join(" ");
  if (children.length === 0) {
    return `<${name} ${rendered}/>`;
  }
  return `<${name} ${rendered}>${children.join("")}</${name}>`;
}

export function text(content: string, attrs: Attrs): string {
  const rendered = Object.entries(attrs)
    .map(([key, value]) => `${key}="${value}"`)
    .join(" ");
  return `<text ${rendered}>${content}</text>`;
}

export function document(width: number, height: number, children: string[]): string {
  const head = `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`;
  return `${head}${children.join("")}</svg>`;
}

/**
 * Map a value in [0, 1] to a perceptually ordered dark-to-bright color
 * (compact viridis-style ramp, linearly interpolated).
 */
export function colorScale(value: number): string {
  const stops: [number, number, number][] = [
    [68, 1, 84],
    [59, 82, 139],
    [33, 145, 140],
    [94, 201, 98],
    [253, 231, 37],
  ];
  const v = Math.min(1, Math.max(0, value));
  const scaled = v * (stops.length - 1);
  const low = Math.min(stops.length - 2, Math.floor(scaled));
  const frac = scaled - low;
  const mix = stops[low].map((c, i) => Math.round(c + frac * (stops[low + 1][i] - c)));
  return `rgb(${mix[0]},${mix[1]},${mix[2]})`;
}
