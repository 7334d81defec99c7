#!/usr/bin/env node
/** plot-beam --out figure.svg beam_observables.csv */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { renderBeam } from "./beam.js";

export function main(argv: string[]): number {
  try {
    const { values, positionals } = parseArgs({
      args: argv,
      options: { out: { type: "string", short: "o" } },
      allowPositionals: true,
    });
    if (positionals.length !== 1 || !values.out) {
      throw new Error("usage: plot-beam --out <figure.svg> <beam csv>");
    }
    const svg = renderBeam(readFileSync(positionals[0]!, "utf8"));
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
