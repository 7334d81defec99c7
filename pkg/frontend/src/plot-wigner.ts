#!/usr/bin/env node
/** plot-wigner --out figure.svg wigner_atoms_0.grid [more grids ...] */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { renderWigner } from "./wigner.js";

export function main(argv: string[]): number {
  try {
    const { values, positionals } = parseArgs({
      args: argv,
      options: { out: { type: "string", short: "o" } },
      allowPositionals: true,
    });
    if (positionals.length === 0 || !values.out) {
      throw new Error("usage: plot-wigner --out <figure.svg> <grid> [<grid> ...]");
    }
    const svg = renderWigner(positionals.map((p) => readFileSync(p, "utf8")));
    writeFileSync(values.out, svg);
    console.log(`wrote ${values.out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (import.meta.url === pathToFileURL(process.argv[1] ?? "").href) {
  process.exit(main(process.argv.slice(2)));
}
