/**
 * CSV ingestion with strict schema checks.
 *
 * The solver CLI writes schema-stable headers, so any mismatch means the
 * file is not the dataset the caller thinks it is — fail fast rather than
 * render nonsense.
 */

export class SchemaError extends Error {
  readonly kind = "schema";
}

export interface Table {
  headers: string[];
  rows: string[][];
}

/** Parse CSV text; handles quoted fields, rejects ragged rows. */
export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const parsed = lines.map(splitCsvLine);
  const headers = parsed[0];
  const rows = parsed.slice(1);
  for (const row of rows) {
    if (row.length !== headers.length) {
      throw new SchemaError(
        `ragged CSV row: expected ${headers.length} fields, got ${row.length}`,
      );
    }
  }
  return { headers, rows };
}

function splitCsvLine(line: string): string[] {
  const out: string[] = [];
  let field = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"' && line[i + 1] === '"') {
        field += '"';
        i++;
      } else if (ch === '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      out.push(field);
      field = "";
    } else {
      field += ch;
    }
  }
  out.push(field);
  return out;
}

/** Assert the header row matches the documented schema exactly. */
export function validateSchema(table: Table, expected: string[], name: string): void {
  const got = table.headers.join(",");
  const want = expected.join(",");
  if (got !== want) {
    throw new SchemaError(`${name}: header mismatch: expected "${want}", got "${got}"`);
  }
  if (table.rows.length === 0) {
    throw new SchemaError(`${name}: no data rows`);
  }
}

/** Numeric column accessor; empty fields (serialized NaN/inf) become null. */
export function numericColumn(table: Table, header: string): (number | null)[] {
  const idx = table.headers.indexOf(header);
  if (idx < 0) {
    throw new SchemaError(`missing column "${header}"`);
  }
  return table.rows.map((row) => {
    const raw = row[idx].trim();
    if (raw === "") return null;
    const v = Number(raw);
    if (!Number.isFinite(v)) return null;
    return v;
  });
}
