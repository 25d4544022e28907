#!/usr/bin/env node
/**
 * render-figures --csv <path> --figure <1|2|3|4> --out <path>
 *
 * Reads the solver CLI's CSV datasets and writes a deterministic SVG.
 * For figure 3 pass the zeta table; the thresholds table is located next
 * to it by the `figure3_zeta.csv` -> `figure3_thresholds.csv` convention
 * (or given explicitly with --aux).
 *
 * Exit codes: 0 success, 2 configuration or schema error.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { parseCsv, SchemaError, Table } from "./csv.js";
import { render } from "./figures.js";

interface Options {
  csv: string;
  figure: number;
  out: string;
  aux: string | null;
}

export function parseOptions(argv: string[]): Options {
  const { values } = parseArgs({
    args: argv,
    options: {
      csv: { type: "string" },
      figure: { type: "string" },
      out: { type: "string" },
      aux: { type: "string" },
    },
  });
  if (!values.csv || !values.figure || !values.out) {
    throw new Error("usage: render-figures --csv <path> --figure <1|2|3|4> --out <path>");
  }
  const figure = Number(values.figure);
  if (![1, 2, 3, 4].includes(figure)) {
    throw new Error(`--figure must be 1..4, got ${values.figure}`);
  }
  return { csv: values.csv, figure, out: values.out, aux: values.aux ?? null };
}

function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new Error(`cannot read ${path}: ${(err as Error).message}`);
  }
  return parseCsv(text);
}

/** Run one render job; exported so tests can drive it without a subprocess. */
export function renderFile(opts: Options): void {
  const primary = readTable(opts.csv);
  let auxiliary: Table | null = null;
  if (opts.figure === 3) {
    const auxPath = opts.aux ?? opts.csv.replace(/_zeta\.csv$/, "_thresholds.csv");
    if (auxPath === opts.csv) {
      throw new SchemaError(
        "figure 3: cannot locate the thresholds table; pass --aux or use the *_zeta.csv naming",
      );
    }
    auxiliary = readTable(auxPath);
  }
  const image = render(opts.figure, primary, auxiliary);
  writeFileSync(opts.out, image);
}

export function main(argv: string[]): number {
  let opts: Options;
  try {
    opts = parseOptions(argv);
  } catch (err) {
    process.stderr.write(
      JSON.stringify({ error: (err as Error).message, kind: "config" }) + "\n",
    );
    return 2;
  }
  try {
    renderFile(opts);
  } catch (err) {
    const kind = err instanceof SchemaError ? "schema" : "config";
    process.stderr.write(JSON.stringify({ error: (err as Error).message, kind }) + "\n");
    return 2;
  }
  return 0;
}

// invoked as a script (not imported by tests)
if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
