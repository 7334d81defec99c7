/**
 * Reader for the metadata-prefixed CSV tables the cavsqueeze CLI writes:
 * '# key = value' lines, then a comma-separated header row, then numeric
 * rows.  Values use printf %g forms, so 'nan' and 'inf' are legal tokens.
 */

export class SchemaError extends Error {}

export interface Table {
  metadata: Record<string, string>;
  header: string[];
  rows: number[][];
}

function parseNumber(token: string, where: string): number {
  switch (token) {
    case "nan":
    case "-nan":
      return NaN;
    case "inf":
      return Infinity;
    case "-inf":
      return -Infinity;
  }
  const value = Number(token);
  if (token === "" || Number.isNaN(value)) {
    throw new SchemaError(`${where}: cannot parse ${JSON.stringify(token)} as a number`);
  }
  return value;
}

export function parseTable(text: string): Table {
  const metadata: Record<string, string> = {};
  let header: string[] | null = null;
  const rows: number[][] = [];

  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = (lines[i] ?? "").trim();
    if (line === "") continue;
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      const eq = body.indexOf("=");
      if (eq >= 0) {
        metadata[body.slice(0, eq).trim()] = body.slice(eq + 1).trim();
      }
      continue;
    }
    const cells = line.split(",").map((c) => c.trim());
    if (header === null) {
      header = cells;
      continue;
    }
    if (cells.length !== header.length) {
      throw new SchemaError(
        `line ${i + 1}: row has ${cells.length} cells, header promises ${header.length}`,
      );
    }
    rows.push(cells.map((c) => parseNumber(c, `line ${i + 1}`)));
  }

  if (header === null) throw new SchemaError("no header row");
  if (rows.length === 0) throw new SchemaError("no data rows");
  return { metadata, header, rows };
}

export function column(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(
      `missing column ${JSON.stringify(name)}; file has [${table.header.join(", ")}]`,
    );
  }
  return table.rows.map((row) => row[idx] as number);
}

export function metaNumber(table: Table, key: string): number {
  const raw = table.metadata[key];
  if (raw === undefined) throw new SchemaError(`missing metadata key ${JSON.stringify(key)}`);
  return parseNumber(raw, `metadata ${key}`);
}
