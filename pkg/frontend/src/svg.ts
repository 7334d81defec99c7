/**
 * Minimal SVG scene building: linear scales, nice ticks, element strings.
 * Everything returns plain strings; no DOM involved.
 */

export type Attrs = Record<string, string | number>;

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linear(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

/** Round-valued ticks at a 1/2/5 step covering [lo, hi]. */
export function ticks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / Math.max(1, target);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const residual = rawStep / mag;
  const step = mag * (residual > 5 ? 10 : residual > 2 ? 5 : residual > 1 ? 2 : 1);
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

/** Compact tick label: trims float noise, switches to exponent form far from 1. */
export function fmt(value: number): string {
  if (value === 0) return "0";
  if (!Number.isFinite(value)) return String(value);
  const abs = Math.abs(value);
  if (abs >= 1e5 || abs < 1e-3) {
    return value.toExponential(2).replace(/\.?0+e/, "e");
  }
  return String(Number(value.toPrecision(10)));
}

function serialize(attrs: Attrs): string {
  return Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${v}"`)
    .join("");
}

export function el(tag: string, attrs: Attrs, content = ""): string {
  return content === ""
    ? `<${tag}${serialize(attrs)}/>`
    : `<${tag}${serialize(attrs)}>${content}</${tag}>`;
}

export function text(x: number, y: number, label: string, attrs: Attrs = {}): string {
  const escaped = label.replace(/&/g, "&amp;").replace(/</g, "&lt;");
  return el("text", { x: round(x), y: round(y), "font-size": 12, ...attrs }, escaped);
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs): string {
  return el("line", {
    x1: round(x1), y1: round(y1), x2: round(x2), y2: round(y2),
    stroke: "#000", ...attrs,
  });
}

export function polyline(points: Array<[number, number]>, attrs: Attrs): string {
  const d = points.map(([x, y]) => `${round(x)},${round(y)}`).join(" ");
  return el("polyline", { points: d, fill: "none", ...attrs });
}

export function rect(x: number, y: number, w: number, h: number, attrs: Attrs): string {
  return el("rect", { x: round(x), y: round(y), width: round(w), height: round(h), ...attrs });
}

function round(v: number): number {
  return Math.round(v * 100) / 100;
}

export interface Frame {
  x0: number;
  y0: number;
  width: number;
  height: number;
}

/** Frame box with ticks outside, labels below/left. */
export function axes(
  frame: Frame,
  xs: Scale,
  ys: Scale,
  xLabel: string,
  yLabel: string,
  xTicks?: number[],
  yTicks?: number[],
): string {
  const { x0, y0, width, height } = frame;
  const parts: string[] = [
    rect(x0, y0, width, height, { fill: "none", stroke: "#000", "stroke-width": 1 }),
  ];
  for (const t of xTicks ?? ticks(xs.domain[0], xs.domain[1])) {
    const px = xs(t);
    parts.push(line(px, y0 + height, px, y0 + height + 5, { "stroke-width": 1 }));
    parts.push(text(px, y0 + height + 18, fmt(t), { "text-anchor": "middle" }));
  }
  for (const t of yTicks ?? ticks(ys.domain[0], ys.domain[1], 5)) {
    const py = ys(t);
    parts.push(line(x0 - 5, py, x0, py, { "stroke-width": 1 }));
    parts.push(text(x0 - 8, py + 4, fmt(t), { "text-anchor": "end" }));
  }
  parts.push(
    text(x0 + width / 2, y0 + height + 36, xLabel, { "text-anchor": "middle", "font-style": "italic" }),
    text(x0 - 44, y0 + height / 2, yLabel, {
      "text-anchor": "middle",
      "font-style": "italic",
      transform: `rotate(-90 ${round(x0 - 44)} ${round(y0 + height / 2)})`,
    }),
  );
  return parts.join("\n");
}

export function document(width: number, height: number, children: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    rect(0, 0, width, height, { fill: "#fff" }),
    ...children,
    "</svg>",
  ].join("\n");
}
