/**
 * Minimal deterministic SVG builder: fixed canvas, pure functions of the
 * data, no timestamps or randomness, numbers printed with fixed precision.
 */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { top: 32, right: 24, bottom: 44, left: 64 };

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  return f;
}

export function xScale(domain: [number, number]): Scale {
  return linearScale(domain, [MARGIN.left, WIDTH - MARGIN.right]);
}

export function yScale(domain: [number, number]): Scale {
  return linearScale(domain, [HEIGHT - MARGIN.bottom, MARGIN.top]);
}

const fmt = (v: number): string => {
  const s = v.toPrecision(6);
  return s.includes(".") ? s.replace(/\.?0+$/, "").replace(/\.?0+e/, "e") : s;
};

export function polyline(
  points: [number, number][],
  stroke: string,
  width: number,
  dash?: string,
): string {
  const d = points.map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`).join("");
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`;
}

export function circle(cx: number, cy: number, r: number, fill: string): string {
  return `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`;
}

export function rect(
  x: number,
  y: number,
  w: number,
  h: number,
  fill: string,
): string {
  return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  anchor: "start" | "middle" | "end" = "start",
  size = 12,
): string {
  return (
    `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" ` +
    `font-family="sans-serif" font-size="${size}">${escapeXml(content)}</text>`
  );
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Round ticks covering the domain, ~n of them. */
export function ticks(domain: [number, number], n = 6): number[] {
  const [lo, hi] = domain;
  const span = hi - lo || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= n) ?? 10 * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / chosen) * chosen; v <= hi + 1e-12; v += chosen) {
    out.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return out;
}

export function axes(
  sx: Scale,
  sy: Scale,
  xLabel: string,
  yLabel: string,
): string {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(polyline([[x0, y0], [x1, y0]], "#000", 1));
  parts.push(polyline([[x0, y0], [x0, y1]], "#000", 1));
  for (const t of ticks(sx.domain)) {
    const px = sx(t);
    parts.push(polyline([[px, y0], [px, y0 + 5]], "#000", 1));
    parts.push(text(px, y0 + 18, trimTick(t), "middle", 11));
  }
  for (const t of ticks(sy.domain)) {
    const py = sy(t);
    parts.push(polyline([[x0 - 5, py], [x0, py]], "#000", 1));
    parts.push(text(x0 - 8, py + 4, trimTick(t), "end", 11));
  }
  parts.push(text((x0 + x1) / 2, HEIGHT - 8, xLabel, "middle"));
  parts.push(
    `<text x="14" y="${(y0 + y1) / 2}" text-anchor="middle" font-family="sans-serif" ` +
      `font-size="12" transform="rotate(-90 14 ${(y0 + y1) / 2})">${escapeXml(yLabel)}</text>`,
  );
  return parts.join("\n");
}

function trimTick(v: number): string {
  const s = v.toPrecision(4);
  return String(Number(s));
}

export function document(body: string[], title: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    rect(0, 0, WIDTH, HEIGHT, "#ffffff"),
    text(WIDTH / 2, 20, title, "middle", 14),
    ...body,
    "</svg>",
    "",
  ].join("\n");
}
