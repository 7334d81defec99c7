import { readFileSync, mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

export const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

export function fixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf8");
}

export function fixturePath(name: string): string {
  return join(FIXTURES, name);
}

export function scratchDir(): string {
  return mkdtempSync(join(tmpdir(), "figures-"));
}

export const WIGNER_SET = [
  "wigner_atoms_0.grid",
  "wigner_atoms_50.grid",
  "wigner_atoms_100.grid",
  "wigner_atoms_200.grid",
];

export const BATH_SET = ["bath_phi_0.csv", "bath_phi_1.csv", "bath_phi_2.csv"];
