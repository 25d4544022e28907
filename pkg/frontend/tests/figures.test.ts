import { mkdtempSync, readFileSync, writeFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { main, renderFile } from "../src/cli.js";
import { parseCsv, SchemaError } from "../src/csv.js";
import { interpolate, render, renderEnvelopeFigure, renderZetaFigure } from "../src/figures.js";

const ENVELOPE_ONE_LAMBDA = [
  "x,lambda,curve_value,envelope,argmin_lambda",
  "0,2,5.4,5.4,2",
  "1,2,6.1,6.1,2",
  "2,2,7.3,7.3,2",
  "",
].join("\n");

const ENVELOPE_TWO_LAMBDAS = [
  "x,lambda,curve_value,envelope,argmin_lambda",
  "0,2,5.4,5.0,3",
  "1,2,6.1,6.1,2",
  "0,3,5.0,5.0,3",
  "1,3,6.5,6.1,2",
  "",
].join("\n");

const ZETA = [
  "x,lambda,zeta",
  "0.5,2,1.2",
  "1.5,2,0.8",
  "3.0,2,0.1",
  "0.5,3,1.0",
  "1.5,3,0.5",
  "3.0,3,-0.2",
  "",
].join("\n");

const THRESHOLDS = [
  "lambda,a_lambda,c1,c2,g_max",
  "2,1.0,0.6,2.0,-7.8",
  "3,1.5,0.9,2.5,-13.0",
  "",
].join("\n");

const pathData = (svg: string): string[] =>
  [...svg.matchAll(/<path d="([^"]+)"[^>]*stroke="([^"]+)" stroke-width="([^"]+)"/g)].map(
    (m) => `${m[1]}|${m[2]}|${m[3]}`,
  );

describe("interpolate", () => {
  it("is linear between knots and clamped outside", () => {
    const pts: [number, number][] = [[0, 0], [2, 4]];
    expect(interpolate(pts, 1)).toBe(2);
    expect(interpolate(pts, -5)).toBe(0);
    expect(interpolate(pts, 9)).toBe(4);
  });
});

describe("envelope figure", () => {
  it("is deterministic", () => {
    const t = parseCsv(ENVELOPE_TWO_LAMBDAS);
    const a = renderEnvelopeFigure(t, "t");
    const b = renderEnvelopeFigure(t, "t");
    expect(a).toBe(b);
  });

  it("with a single multiplier the envelope overlaps the curve", () => {
    const svg = renderEnvelopeFigure(parseCsv(ENVELOPE_ONE_LAMBDA), "t");
    const paths = pathData(svg);
    const curve = paths.find((p) => p.endsWith("|#1f77b4|1"));
    const envelope = paths.find((p) => p.endsWith("|#d62728|3"));
    expect(curve).toBeDefined();
    expect(envelope).toBeDefined();
    expect(curve!.split("|")[0]).toBe(envelope!.split("|")[0]);
  });

  it("rejects a schema mismatch", () => {
    const bad = parseCsv("x,lam,value\n1,2,3\n");
    expect(() => renderEnvelopeFigure(bad, "t")).toThrow(SchemaError);
  });
});

describe("zeta figure", () => {
  it("draws a barrier marker and both threshold markers per multiplier", () => {
    const svg = renderZetaFigure(parseCsv(ZETA), parseCsv(THRESHOLDS), "t");
    const circles = [...svg.matchAll(/<circle /g)];
    expect(circles.length).toBe(6); // 2 multipliers x 3 markers
    expect(svg).toContain('fill="#000000"');   // barrier
    expect(svg).toContain('fill="#d62728"');   // lower threshold
    expect(svg).toContain('fill="#2ca02c"');   // upper threshold
  });

  it("requires the thresholds table", () => {
    expect(() => render(3, parseCsv(ZETA), null)).toThrow(/thresholds table/);
  });
});

describe("surface figure", () => {
  it("renders infeasible cells in gray", () => {
    const csv = [
      "x,K,value,lambda_star,status",
      "1,1,,,infeasible",
      "1,2,4.0,2.1,interior_optimum",
      "2,1,3.5,2.5,interior_optimum",
      "2,2,5.0,1.9,interior_optimum",
      "",
    ].join("\n");
    const svg = render(2, parseCsv(csv), null);
    expect(svg).toContain('fill="#555555"');
  });
});

describe("cli", () => {
  it("renders figure 3 from files using the naming convention", () => {
    const dir = mkdtempSync(join(tmpdir(), "figtest-"));
    writeFileSync(join(dir, "figure3_zeta.csv"), ZETA);
    writeFileSync(join(dir, "figure3_thresholds.csv"), THRESHOLDS);
    const out = join(dir, "fig3.svg");
    renderFile({ csv: join(dir, "figure3_zeta.csv"), figure: 3, out, aux: null });
    expect(readFileSync(out, "utf8")).toContain("<svg");
  });

  it("produces byte-identical images across runs", () => {
    const dir = mkdtempSync(join(tmpdir(), "figtest-"));
    writeFileSync(join(dir, "e.csv"), ENVELOPE_TWO_LAMBDAS);
    const out1 = join(dir, "a.svg");
    const out2 = join(dir, "b.svg");
    renderFile({ csv: join(dir, "e.csv"), figure: 1, out: out1, aux: null });
    renderFile({ csv: join(dir, "e.csv"), figure: 1, out: out2, aux: null });
    expect(readFileSync(out1)).toEqual(readFileSync(out2));
  });

  it("reports a structured error and writes no image for an empty CSV", () => {
    const dir = mkdtempSync(join(tmpdir(), "figtest-"));
    writeFileSync(join(dir, "empty.csv"), "");
    const out = join(dir, "never.svg");
    const code = main(["--csv", join(dir, "empty.csv"), "--figure", "1", "--out", out]);
    expect(code).toBe(2);
    expect(existsSync(out)).toBe(false);
  });

  it("rejects bad figure ids", () => {
    const code = main(["--csv", "x.csv", "--figure", "9", "--out", "y.svg"]);
    expect(code).toBe(2);
  });
});
