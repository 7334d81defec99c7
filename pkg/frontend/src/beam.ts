/**
 * Two-panel beam figure: mean photon number, then both quadrature
 * variances, against the number of atoms that have crossed the cavity.
 * Dashed asymptotes come from the squeeze factor r stored in the file
 * metadata, never from the data itself.
 */

import { column, metaNumber, parseTable, SchemaError } from "./table.js";
import { axes, document, line, linear, polyline, text } from "./svg.js";

export interface BeamAsymptotes {
  nMean: number;
  varX1: number;
  varX2: number;
}

/** Steady-state targets for squeeze factor r: sinh^2 r and e^{+-2r}/4. */
export function asymptotes(r: number): BeamAsymptotes {
  return {
    nMean: Math.sinh(r) ** 2,
    varX1: Math.exp(2 * r) / 4,
    varX2: Math.exp(-2 * r) / 4,
  };
}

const WIDTH = 640;
const PANEL = { x0: 76, width: 530, height: 240 };
const SOLID = { stroke: "#1f4e8c", "stroke-width": 1.6 };
const SOLID2 = { stroke: "#b2452c", "stroke-width": 1.6 };
const DASHED = { stroke: "#444", "stroke-width": 1.2, "stroke-dasharray": "7 4" };

function asymptoteLine(
  xs: (v: number) => number,
  ys: (v: number) => number,
  x1: number,
  level: number,
  label: string,
): string {
  return [
    line(xs(0), ys(level), xs(x1), ys(level), DASHED),
    text(xs(x1) - 4, ys(level) - 6, label, { "text-anchor": "end", fill: "#444" }),
  ].join("\n");
}

export function renderBeam(csvText: string): string {
  const table = parseTable(csvText);
  const atoms = column(table, "atom_index");
  const nMean = column(table, "n_mean");
  const varX1 = column(table, "var_x1");
  const varX2 = column(table, "var_x2");
  const r = metaNumber(table, "r");
  if (!Number.isFinite(r)) {
    throw new SchemaError("metadata r is not finite; no squeeze target to draw");
  }
  const a = asymptotes(r);

  const xMax = Math.max(...atoms);
  const topFrame = { ...PANEL, y0: 34 };
  const bottomFrame = { ...PANEL, y0: 34 + PANEL.height + 84 };
  const xsTop = linear([0, xMax], [topFrame.x0, topFrame.x0 + PANEL.width]);
  const xsBot = linear([0, xMax], [bottomFrame.x0, bottomFrame.x0 + PANEL.width]);

  const yTopMax = 1.1 * Math.max(a.nMean, ...nMean);
  const ysTop = linear([0, yTopMax], [topFrame.y0 + PANEL.height, topFrame.y0]);
  const yBotMax = 1.1 * Math.max(a.varX1, ...varX1);
  const ysBot = linear([0, yBotMax], [bottomFrame.y0 + PANEL.height, bottomFrame.y0]);

  const points = (xv: number[], yv: number[], xs: (v: number) => number, ys: (v: number) => number) =>
    xv.map((x, i) => [xs(x), ys(yv[i] as number)] as [number, number]);

  const children = [
    text(WIDTH / 2, 20, `cavity field driven by the atomic beam (r = ${fmtR(r)})`, {
      "text-anchor": "middle",
      "font-size": 14,
    }),
    axes(topFrame, xsTop, ysTop, "atoms through the cavity", "⟨n⟩"),
    polyline(points(atoms, nMean, xsTop, ysTop), SOLID),
    asymptoteLine(xsTop, ysTop, xMax, a.nMean, `sinh²r = ${a.nMean.toFixed(4)}`),

    axes(bottomFrame, xsBot, ysBot, "atoms through the cavity", "quadrature variance"),
    polyline(points(atoms, varX1, xsBot, ysBot), SOLID),
    polyline(points(atoms, varX2, xsBot, ysBot), SOLID2),
    asymptoteLine(xsBot, ysBot, xMax, a.varX1, `e²ʳ/4 = ${a.varX1.toFixed(4)}`),
    asymptoteLine(xsBot, ysBot, xMax, a.varX2, `e⁻²ʳ/4 = ${a.varX2.toFixed(4)}`),
    text(bottomFrame.x0 + 10, bottomFrame.y0 + 16, "(ΔX₁)²", { fill: SOLID.stroke }),
    text(bottomFrame.x0 + 10, bottomFrame.y0 + 32, "(ΔX₂)²", { fill: SOLID2.stroke }),
  ];

  return document(WIDTH, bottomFrame.y0 + PANEL.height + 52, children);
}

function fmtR(r: number): string {
  return String(Number(r.toPrecision(6)));
}
