#!/usr/bin/env node
/** plot-bath --out figure.svg [--time-in-gamma-eng] bath_phi_0.csv [more ...] */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { renderBath } from "./bath.js";

export function main(argv: string[]): number {
  try {
    const { values, positionals } = parseArgs({
      args: argv,
      options: {
        out: { type: "string", short: "o" },
        "time-in-gamma-eng": { type: "boolean", default: false },
      },
      allowPositionals: true,
    });
    if (positionals.length === 0 || !values.out) {
      throw new Error(
        "usage: plot-bath --out <figure.svg> [--time-in-gamma-eng] <csv> [<csv> ...]",
      );
    }
    const svg = renderBath(
      positionals.map((p) => readFileSync(p, "utf8")),
      { timeInGammaEng: values["time-in-gamma-eng"] },
    );
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
