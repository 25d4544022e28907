import { describe, expect, it } from "vitest";

import { numericColumn, parseCsv, SchemaError, validateSchema } from "../src/csv.js";

describe("parseCsv", () => {
  it("parses headers and rows", () => {
    const t = parseCsv("a,b\n1,2\n3,4\n");
    expect(t.headers).toEqual(["a", "b"]);
    expect(t.rows).toEqual([["1", "2"], ["3", "4"]]);
  });

  it("handles quoted fields with commas", () => {
    const t = parseCsv('a,b\n"1,5",2\n');
    expect(t.rows[0]).toEqual(["1,5", "2"]);
  });

  it("rejects empty input", () => {
    expect(() => parseCsv("")).toThrow(SchemaError);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1\n")).toThrow(/ragged/);
  });
});

describe("validateSchema", () => {
  it("accepts exact header match with data", () => {
    const t = parseCsv("x,y\n1,2\n");
    expect(() => validateSchema(t, ["x", "y"], "t")).not.toThrow();
  });

  it("rejects header mismatch", () => {
    const t = parseCsv("x,z\n1,2\n");
    expect(() => validateSchema(t, ["x", "y"], "t")).toThrow(/header mismatch/);
  });

  it("rejects header-only files", () => {
    const t = parseCsv("x,y\n");
    expect(() => validateSchema(t, ["x", "y"], "t")).toThrow(/no data rows/);
  });
});

describe("numericColumn", () => {
  it("extracts numbers and maps blanks to null", () => {
    const t = parseCsv("x,y\n1,\n2,3\n");
    expect(numericColumn(t, "y")).toEqual([null, 3]);
  });

  it("maps non-finite serializations to null", () => {
    const t = parseCsv("x\ninf\n-inf\nnan\n1.5\n");
    expect(numericColumn(t, "x")).toEqual([null, null, null, 1.5]);
  });

  it("rejects unknown columns", () => {
    const t = parseCsv("x\n1\n");
    expect(() => numericColumn(t, "q")).toThrow(/missing column/);
  });
});
