/**
 * Polarization decay under the engineered squeezed reservoir: one solid
 * exact curve and one dashed analytic curve per squeezing angle, on a
 * common time axis in units of 1/g or, on request, 1/Gamma_eng.
 */

import { column, metaNumber, parseTable, SchemaError, Table } from "./table.js";
import { axes, document, linear, polyline, text } from "./svg.js";

export interface BathOptions {
  /** Rescale the time axis to t * Gamma_eng using each file's metadata. */
  timeInGammaEng?: boolean;
}

const PALETTE = ["#1f4e8c", "#b2452c", "#278a4a", "#8c5d1f", "#6a3f8c"];

/** Squeezing angles render as fractions of pi: 0, pi/2, pi, 0.75pi, ... */
export function phiLabel(phi: number): string {
  const frac = phi / Math.PI;
  if (Math.abs(frac) < 1e-9) return "0";
  if (Math.abs(frac - 0.5) < 1e-9) return "π/2";
  if (Math.abs(frac - 1) < 1e-9) return "π";
  return `${Number(frac.toPrecision(3))}π`;
}

interface Curve {
  phi: number;
  time: number[];
  exact: number[];
  analytic: number[];
}

function toCurve(table: Table, rescale: boolean): Curve {
  const time = column(table, "time");
  const scale = rescale ? metaNumber(table, "gamma_eng") : 1;
  return {
    phi: metaNumber(table, "phi"),
    time: time.map((t) => t * scale),
    exact: column(table, "sx_exact"),
    analytic: column(table, "sx_analytic"),
  };
}

const FRAME = { x0: 80, y0: 40, width: 540, height: 330 };

export function renderBath(csvTexts: string[], options: BathOptions = {}): string {
  if (csvTexts.length === 0) throw new SchemaError("no csv files given");
  const rescale = options.timeInGammaEng ?? false;
  const curves = csvTexts.map((t) => toCurve(parseTable(t), rescale));
  curves.sort((a, b) => a.phi - b.phi);

  const tMax = Math.max(...curves.map((c) => c.time[c.time.length - 1] as number));
  const yLo = Math.min(0, ...curves.flatMap((c) => [...c.exact, ...c.analytic]));
  const yHi = Math.max(1, ...curves.flatMap((c) => [...c.exact, ...c.analytic]));
  const xs = linear([0, tMax], [FRAME.x0, FRAME.x0 + FRAME.width]);
  const ys = linear(
    [yLo - 0.02, yHi + 0.04],
    [FRAME.y0 + FRAME.height, FRAME.y0],
  );

  const children: string[] = [
    axes(FRAME, xs, ys, rescale ? "t Γ_eng" : "t g", "⟨σₓ⟩"),
  ];
  curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    const pts = (values: number[]) =>
      curve.time.map((t, k) => [xs(t), ys(values[k] as number)] as [number, number]);
    children.push(
      polyline(pts(curve.exact), { stroke: color, "stroke-width": 1.6 }),
      polyline(pts(curve.analytic), {
        stroke: color,
        "stroke-width": 1.3,
        "stroke-dasharray": "6 5",
      }),
      text(FRAME.x0 + FRAME.width - 10, FRAME.y0 + 18 + 16 * i, `φ = ${phiLabel(curve.phi)}`, {
        "text-anchor": "end",
        fill: color,
      }),
    );
  });
  children.push(
    text(FRAME.x0, FRAME.y0 - 10, "solid: exact    dashed: analytic", {
      fill: "#444",
      "font-size": 11,
    }),
  );
  return document(FRAME.x0 + FRAME.width + 40, FRAME.y0 + FRAME.height + 60, children);
}
