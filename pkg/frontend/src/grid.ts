/**
 * Reader for the Wigner grid format: '# key = value' metadata lines,
 * '# note = ...' free-text lines, '# x: lo hi count' / '# p: lo hi count'
 * axis descriptors, then one whitespace-separated row per x-axis point.
 */

import { SchemaError } from "./table.js";

export interface WignerGrid {
  metadata: Record<string, string>;
  notes: string[];
  x: number[];
  p: number[];
  values: number[][];
}

function linspace(lo: number, hi: number, count: number): number[] {
  if (count < 2) return [lo];
  return Array.from({ length: count }, (_, i) => lo + ((hi - lo) * i) / (count - 1));
}

export function parseGrid(text: string): WignerGrid {
  const metadata: Record<string, string> = {};
  const notes: string[] = [];
  const axes: { x?: number[]; p?: number[] } = {};
  const values: number[][] = [];

  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (line === "") continue;
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      const axis = /^([xp]):\s+(\S+)\s+(\S+)\s+(\d+)$/.exec(body);
      if (axis) {
        axes[axis[1] as "x" | "p"] = linspace(
          Number(axis[2]),
          Number(axis[3]),
          Number(axis[4]),
        );
        continue;
      }
      const eq = body.indexOf("=");
      if (eq >= 0) {
        const key = body.slice(0, eq).trim();
        const val = body.slice(eq + 1).trim();
        if (key === "note") notes.push(val);
        else metadata[key] = val;
      }
      continue;
    }
    values.push(line.split(/\s+/).map(Number));
  }

  const { x, p } = axes;
  if (!x || !p) throw new SchemaError("missing x/p axis descriptors");
  if (values.length !== x.length || values.some((row) => row.length !== p.length)) {
    throw new SchemaError(`value block does not match axes (${x.length} x ${p.length})`);
  }
  if (values.some((row) => row.some(Number.isNaN))) {
    throw new SchemaError("value block contains non-numeric entries");
  }
  return { metadata, notes, x, p, values };
}

/** Axes agree exactly: same descriptors give bit-identical endpoints. */
export function sameAxes(a: WignerGrid, b: WignerGrid): boolean {
  const match = (u: number[], v: number[]) =>
    u.length === v.length && u[0] === v[0] && u[u.length - 1] === v[v.length - 1];
  return match(a.x, b.x) && match(a.p, b.p);
}
