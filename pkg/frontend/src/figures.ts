/**
 * Figure renderers: pure functions from parsed CSV tables to SVG text.
 *
 * Expected schemas (written by the solver CLI):
 *   figure 1 & 4 envelope: x, lambda, curve_value, envelope, argmin_lambda
 *   figure 2 surface:      x, K, value, lambda_star, status
 *   figure 3 zeta:         x, lambda, zeta
 *   figure 3 thresholds:   lambda, a_lambda, c1, c2, g_max
 *   figure 4 comparison:   x, lambda_star_no_cost, lambda_star_with_cost
 */

import { numericColumn, SchemaError, Table, validateSchema } from "./csv.js";
import * as svg from "./svg.js";

export const SCHEMAS = {
  envelope: ["x", "lambda", "curve_value", "envelope", "argmin_lambda"],
  surface: ["x", "K", "value", "lambda_star", "status"],
  zeta: ["x", "lambda", "zeta"],
  thresholds: ["lambda", "a_lambda", "c1", "c2", "g_max"],
  comparison: ["x", "lambda_star_no_cost", "lambda_star_with_cost"],
};

const CURVE_COLORS = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79",
];

interface Series {
  key: number;
  points: [number, number][];
}

/** Group (x, y) pairs into one series per distinct value of the key column. */
function groupSeries(
  xs: (number | null)[],
  keys: (number | null)[],
  ys: (number | null)[],
): Series[] {
  const byKey = new Map<number, [number, number][]>();
  for (let i = 0; i < xs.length; i++) {
    const x = xs[i];
    const k = keys[i];
    const y = ys[i];
    if (x === null || k === null || y === null) continue;
    if (!byKey.has(k)) byKey.set(k, []);
    byKey.get(k)!.push([x, y]);
  }
  return [...byKey.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([key, points]) => ({
      key,
      points: points.sort((a, b) => a[0] - b[0]),
    }));
}

function extent(values: number[]): [number, number] {
  if (values.length === 0) {
    throw new SchemaError("no finite values to plot");
  }
  let lo = values[0];
  let hi = values[0];
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

/** Linear interpolation on a sorted series, clamped at the ends. */
export function interpolate(points: [number, number][], x: number): number {
  if (x <= points[0][0]) return points[0][1];
  const last = points[points.length - 1];
  if (x >= last[0]) return last[1];
  for (let i = 1; i < points.length; i++) {
    const [x1, y1] = points[i];
    if (x <= x1) {
      const [x0, y0] = points[i - 1];
      const t = (x - x0) / (x1 - x0 || 1);
      return y0 + t * (y1 - y0);
    }
  }
  return last[1];
}

/** Dual-envelope curves with the pointwise minimum drawn bold and red. */
export function renderEnvelopeFigure(table: Table, title: string): string {
  validateSchema(table, SCHEMAS.envelope, "envelope");
  const xs = numericColumn(table, "x");
  const lams = numericColumn(table, "lambda");
  const curves = numericColumn(table, "curve_value");
  const env = numericColumn(table, "envelope");
  const series = groupSeries(xs, lams, curves);
  if (series.length === 0) {
    throw new SchemaError("envelope: no plottable curves");
  }

  const envPoints = groupSeries(xs, xs.map(() => 0), env)[0].points
    // one envelope value per x (repeated across lambda rows)
    .filter((p, i, arr) => i === 0 || p[0] !== arr[i - 1][0]);

  const allY = envPoints.map((p) => p[1]);
  // clip the vertical range to what the envelope occupies (plus headroom)
  // so steep curves for extreme multipliers do not flatten the plot
  const [eLo, eHi] = extent(allY);
  const pad = 0.35 * (eHi - eLo);
  const sx = svg.xScale(extent(envPoints.map((p) => p[0])));
  const sy = svg.yScale([eLo - pad, eHi + pad]);

  const body: string[] = [svg.axes(sx, sy, "initial capital x", "multiplier curves and envelope")];
  series.forEach((s, i) => {
    const pts = s.points
      .filter(([, y]) => y >= sy.domain[0] && y <= sy.domain[1])
      .map(([x, y]) => [sx(x), sy(y)] as [number, number]);
    if (pts.length > 1) {
      body.push(svg.polyline(pts, CURVE_COLORS[i % CURVE_COLORS.length], 1));
    }
  });
  body.push(
    svg.polyline(
      envPoints.map(([x, y]) => [sx(x), sy(y)] as [number, number]),
      "#d62728",
      3,
    ),
  );
  return svg.document(body, title);
}

/** Two heat panels: constrained value and optimal multiplier over (x, K). */
export function renderSurfaceFigure(table: Table, title: string): string {
  validateSchema(table, SCHEMAS.surface, "surface");
  const xs = numericColumn(table, "x");
  const Ks = numericColumn(table, "K");
  const vals = numericColumn(table, "value");
  const lams = numericColumn(table, "lambda_star");

  const xLevels = [...new Set(xs.filter((v): v is number => v !== null))].sort((a, b) => a - b);
  const kLevels = [...new Set(Ks.filter((v): v is number => v !== null))].sort((a, b) => a - b);
  if (xLevels.length === 0 || kLevels.length === 0) {
    throw new SchemaError("surface: no grid cells");
  }

  const panels: { label: string; data: (number | null)[] }[] = [
    { label: "value V(x, K)", data: vals },
    { label: "multiplier", data: lams },
  ];
  const body: string[] = [];
  const panelWidth = (svg.WIDTH - svg.MARGIN.left - svg.MARGIN.right - 40) / 2;
  const panelHeight = svg.HEIGHT - svg.MARGIN.top - svg.MARGIN.bottom;
  panels.forEach((panel, p) => {
    const left = svg.MARGIN.left + p * (panelWidth + 40);
    const finite = panel.data.filter((v): v is number => v !== null);
    const [lo, hi] = extent(finite);
    const cw = panelWidth / xLevels.length;
    const ch = panelHeight / kLevels.length;
    for (let i = 0; i < xs.length; i++) {
      const x = xs[i];
      const K = Ks[i];
      if (x === null || K === null) continue;
      const col = xLevels.indexOf(x);
      const row = kLevels.indexOf(K);
      const v = panel.data[i];
      const fill = v === null ? "#555555" : ramp((v - lo) / (hi - lo || 1));
      body.push(
        svg.rect(
          left + col * cw,
          svg.MARGIN.top + panelHeight - (row + 1) * ch,
          cw,
          ch,
          fill,
        ),
      );
    }
    body.push(svg.text(left + panelWidth / 2, svg.HEIGHT - 16, panel.label, "middle"));
  });
  body.push(svg.text(svg.MARGIN.left / 2, svg.HEIGHT / 2, "K", "middle"));
  body.push(svg.text(svg.WIDTH / 2, svg.HEIGHT - 2, "x", "middle", 11));
  return svg.document(body, title);
}

function ramp(t: number): string {
  const c = Math.max(0, Math.min(1, t));
  const r = Math.round(40 + 200 * c);
  const g = Math.round(60 + 80 * (1 - Math.abs(c - 0.5) * 2));
  const b = Math.round(220 - 180 * c);
  return `#${hex(r)}${hex(g)}${hex(b)}`;
}

const hex = (v: number): string => v.toString(16).padStart(2, "0");

/**
 * Slope curves per multiplier with markers at the optimal barrier and at
 * both thresholds of the reflected pair.
 */
export function renderZetaFigure(zeta: Table, thresholds: Table, title: string): string {
  validateSchema(zeta, SCHEMAS.zeta, "zeta");
  validateSchema(thresholds, SCHEMAS.thresholds, "thresholds");
  const xs = numericColumn(zeta, "x");
  const lams = numericColumn(zeta, "lambda");
  const zs = numericColumn(zeta, "zeta");
  const series = groupSeries(xs, lams, zs);
  if (series.length === 0) {
    throw new SchemaError("zeta: no plottable curves");
  }

  // vertical range driven by the upper parts of the curves; the slopes
  // plunge near 0 for large multipliers, which would hide all structure
  const tops = series.map((s) => extent(s.points.map((p) => p[1]))[1]);
  const yHi = extent(tops)[1];
  const yLo = Math.min(
    0,
    ...series.map((s) => interpolate(s.points, s.points[s.points.length - 1][0] / 2)),
  );
  const span = yHi - yLo || 1;
  const sx = svg.xScale(extent(series.flatMap((s) => s.points.map((p) => p[0]))));
  const sy = svg.yScale([yLo - 0.1 * span, yHi + 0.1 * span]);

  const body: string[] = [svg.axes(sx, sy, "barrier level", "slope functional")];
  const byLam = new Map(series.map((s) => [s.key, s]));
  series.forEach((s, i) => {
    const pts = s.points
      .filter(([, y]) => y >= sy.domain[0] && y <= sy.domain[1])
      .map(([x, y]) => [sx(x), sy(y)] as [number, number]);
    if (pts.length > 1) {
      body.push(svg.polyline(pts, CURVE_COLORS[i % CURVE_COLORS.length], 1.5));
    }
  });

  const tLam = numericColumn(thresholds, "lambda");
  const tA = numericColumn(thresholds, "a_lambda");
  const tC1 = numericColumn(thresholds, "c1");
  const tC2 = numericColumn(thresholds, "c2");
  for (let i = 0; i < tLam.length; i++) {
    const lam = tLam[i];
    if (lam === null) continue;
    const s = byLam.get(lam);
    if (s === undefined) continue;
    const mark = (x: number | null, fill: string) => {
      if (x === null) return;
      const y = interpolate(s.points, x);
      if (y < sy.domain[0] || y > sy.domain[1]) return;
      body.push(svg.circle(sx(x), sy(y), 4, fill));
    };
    mark(tA[i], "#000000");     // optimal barrier
    mark(tC1[i], "#d62728");    // lower threshold
    mark(tC2[i], "#2ca02c");    // upper threshold
  }
  return svg.document(body, title);
}

/** Figure-id dispatch used by the CLI. */
export function render(
  figureId: number,
  primary: Table,
  auxiliary: Table | null,
): string {
  switch (figureId) {
    case 1:
      return renderEnvelopeFigure(primary, "Dual envelope, no transaction cost");
    case 2:
      return renderSurfaceFigure(primary, "Constrained value and multiplier surfaces");
    case 3:
      if (auxiliary === null) {
        throw new SchemaError("figure 3 requires the thresholds table alongside the zeta table");
      }
      return renderZetaFigure(primary, auxiliary, "Slope curves and optimal thresholds");
    case 4:
      return renderEnvelopeFigure(primary, "Dual envelope, transaction cost 0.05");
    default:
      throw new SchemaError(`figure id must be 1..4, got ${figureId}`);
  }
}
