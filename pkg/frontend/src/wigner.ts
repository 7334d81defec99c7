/**
 * Panel-per-checkpoint heatmaps of the Wigner function, all sharing one
 * diverging color scale symmetric about zero so negativity and panels
 * are comparable by eye.
 */

import { parseGrid, sameAxes, WignerGrid } from "./grid.js";
import { SchemaError } from "./table.js";
import { axes, document, el, linear, rect, text } from "./svg.js";

/** Largest |W| over all grids; the shared scale spans [-max, +max]. */
export function symmetricMax(grids: WignerGrid[]): number {
  let peak = 0;
  for (const grid of grids) {
    for (const row of grid.values) {
      for (const v of row) peak = Math.max(peak, Math.abs(v));
    }
  }
  return peak;
}

// blue -> white -> red anchors; t in [0, 1] with 0.5 at W = 0
const STOPS: Array<[number, [number, number, number]]> = [
  [0.0, [33, 102, 172]],
  [0.5, [255, 255, 255]],
  [1.0, [178, 24, 43]],
];

export function diverging(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  let lo = STOPS[0]!;
  let hi = STOPS[STOPS.length - 1]!;
  for (let i = 0; i + 1 < STOPS.length; i++) {
    if (clamped >= STOPS[i]![0] && clamped <= STOPS[i + 1]![0]) {
      lo = STOPS[i]!;
      hi = STOPS[i + 1]!;
      break;
    }
  }
  const f = hi[0] === lo[0] ? 0 : (clamped - lo[0]) / (hi[0] - lo[0]);
  const channel = (k: 0 | 1 | 2) => Math.round(lo[1][k] + (hi[1][k] - lo[1][k]) * f);
  const hex = (n: number) => n.toString(16).padStart(2, "0");
  return `#${hex(channel(0))}${hex(channel(1))}${hex(channel(2))}`;
}

const PANEL = 232;
const GAP_X = 84;
const GAP_Y = 78;
const LEFT = 72;
const TOP = 46;

function heatmap(grid: WignerGrid, frame: { x0: number; y0: number }, vmax: number): string {
  const nx = grid.x.length;
  const np = grid.p.length;
  const cw = PANEL / nx;
  const ch = PANEL / np;
  const cells: string[] = [];
  // run-length merge along x; the flat far field collapses to single rects
  for (let ip = 0; ip < np; ip++) {
    const y = frame.y0 + PANEL - (ip + 1) * ch;
    let runStart = 0;
    let runColor = diverging(0.5 + (grid.values[0]![ip] as number) / (2 * vmax));
    for (let ix = 1; ix <= nx; ix++) {
      const color =
        ix < nx ? diverging(0.5 + (grid.values[ix]![ip] as number) / (2 * vmax)) : "";
      if (color !== runColor) {
        cells.push(
          rect(frame.x0 + runStart * cw, y, (ix - runStart) * cw + 0.4, ch + 0.4, {
            fill: runColor,
          }),
        );
        runStart = ix;
        runColor = color;
      }
    }
  }
  return cells.join("\n");
}

function colorbar(x0: number, y0: number, height: number, vmax: number): string {
  const steps = 64;
  const parts: string[] = [];
  for (let i = 0; i < steps; i++) {
    const t = 1 - i / (steps - 1);
    parts.push(rect(x0, y0 + (i * height) / steps, 16, height / steps + 0.6, { fill: diverging(t) }));
  }
  parts.push(rect(x0, y0, 16, height, { fill: "none", stroke: "#000" }));
  for (const f of [-1, -0.5, 0, 0.5, 1]) {
    const y = y0 + ((1 - (f + 1) / 2) * height);
    parts.push(
      text(x0 + 22, y + 4, (f * vmax).toFixed(3), { "font-size": 11 }),
    );
  }
  parts.push(text(x0, y0 - 12, "W", { "font-style": "italic" }));
  return parts.join("\n");
}

export function renderWigner(gridTexts: string[]): string {
  if (gridTexts.length === 0) throw new SchemaError("no grid files given");
  const grids = gridTexts.map(parseGrid);
  for (const grid of grids) {
    if (grid.metadata["atoms"] === undefined) {
      throw new SchemaError("grid lacks the atoms metadata key");
    }
    if (!sameAxes(grid, grids[0]!)) {
      throw new SchemaError("panels disagree on grid axes");
    }
  }
  grids.sort((a, b) => Number(a.metadata["atoms"]) - Number(b.metadata["atoms"]));
  const vmax = symmetricMax(grids);
  if (!(vmax > 0)) throw new SchemaError("all grid values are zero");

  const cols = grids.length > 1 ? 2 : 1;
  const rows = Math.ceil(grids.length / cols);
  const children: string[] = [];
  for (let i = 0; i < grids.length; i++) {
    const grid = grids[i]!;
    const frame = {
      x0: LEFT + (i % cols) * (PANEL + GAP_X),
      y0: TOP + Math.floor(i / cols) * (PANEL + GAP_Y),
      width: PANEL,
      height: PANEL,
    };
    const xs = linear([grid.x[0]!, grid.x[grid.x.length - 1]!], [frame.x0, frame.x0 + PANEL]);
    const ys = linear([grid.p[0]!, grid.p[grid.p.length - 1]!], [frame.y0 + PANEL, frame.y0]);
    const atoms = Number(grid.metadata["atoms"]);
    children.push(
      el("g", {}, heatmap(grid, frame, vmax)),
      axes(frame, xs, ys, "x₁", "x₂"),
      text(frame.x0 + PANEL / 2, frame.y0 - 10, atoms === 0 ? "initial field" : `after ${atoms} atoms`, {
        "text-anchor": "middle",
        "font-size": 13,
      }),
    );
  }
  const width = LEFT + cols * PANEL + (cols - 1) * GAP_X + 120;
  const height = TOP + rows * PANEL + (rows - 1) * GAP_Y + 58;
  children.push(colorbar(width - 86, TOP, PANEL, vmax));
  return document(width, height, children);
}
