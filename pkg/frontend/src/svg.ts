/**
 * Tiny deterministic SVG chart builder: one x/y panel with optional
 * shaded bands, polylines, and point markers. No randomness, fixed
 * styling, so report bytes are stable for a given bundle.
 */

export interface Series {
  label: string;
  points: Array<{ x: number; y: number }>;
  color: string;
  /** draw connecting line (default true) */
  line?: boolean;
  /** draw circle markers (default true) */
  markers?: boolean;
  /** dashed stroke, e.g. for reference curves */
  dashed?: boolean;
}

export interface Band {
  points: Array<{ x: number; low: number; high: number }>;
  color: string;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  bands?: Band[];
  notes?: string[];
  logY?: boolean;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 72, right: 24, top: 44, bottom: 56 };

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const span = hi - lo;
  const step = 10 ** Math.floor(Math.log10(span / count));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen =
    candidates.find((s) => span / s <= count) ?? candidates[candidates.length - 1];
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / chosen) * chosen; v <= hi + 1e-12; v += chosen) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export function renderChart(spec: ChartSpec): string {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of spec.series) {
    for (const p of s.points) {
      xs.push(p.x);
      ys.push(p.y);
    }
  }
  for (const b of spec.bands ?? []) {
    for (const p of b.points) {
      xs.push(p.x);
      ys.push(p.low, p.high);
    }
  }
  if (xs.length === 0) {
    throw new Error("chart with no data");
  }
  const yTransform = (v: number) => (spec.logY ? Math.log10(Math.max(v, 1e-300)) : v);
  const tys = ys.map(yTransform);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(...tys);
  let yHi = Math.max(...tys);
  if (xLo === xHi) {
    xLo -= 1;
    xHi += 1;
  }
  if (yLo === yHi) {
    yLo -= 1;
    yHi += 1;
  }
  const padY = 0.06 * (yHi - yLo);
  yLo -= padY;
  yHi += padY;
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const px = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const py = (y: number) =>
    MARGIN.top + plotH - ((yTransform(y) - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${spec.title}</text>`,
  );

  for (const tick of niceTicks(xLo, xHi)) {
    const x = px(tick);
    parts.push(
      `<line x1="${x.toFixed(1)}" y1="${MARGIN.top}" x2="${x.toFixed(1)}" ` +
        `y2="${MARGIN.top + plotH}" stroke="#dddddd"/>`,
      `<text x="${x.toFixed(1)}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" ` +
        `font-size="11">${Number(tick.toPrecision(6))}</text>`,
    );
  }
  for (const tick of niceTicks(yLo, yHi)) {
    const y = MARGIN.top + plotH - ((tick - yLo) / (yHi - yLo)) * plotH;
    const label = spec.logY ? `1e${Number(tick.toPrecision(4))}` : Number(tick.toPrecision(6));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y.toFixed(1)}" x2="${MARGIN.left + plotW}" ` +
        `y2="${y.toFixed(1)}" stroke="#dddddd"/>`,
      `<text x="${MARGIN.left - 6}" y="${(y + 4).toFixed(1)}" text-anchor="end" ` +
        `font-size="11">${label}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333333"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle" ` +
      `font-size="13">${spec.xLabel}</text>`,
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${spec.yLabel}</text>`,
  );

  for (const band of spec.bands ?? []) {
    const sorted = [...band.points].sort((a, b) => a.x - b.x);
    const upper = sorted.map((p) => `${px(p.x).toFixed(1)},${py(p.high).toFixed(1)}`);
    const lower = [...sorted]
      .reverse()
      .map((p) => `${px(p.x).toFixed(1)},${py(p.low).toFixed(1)}`);
    parts.push(
      `<polygon points="${[...upper, ...lower].join(" ")}" fill="${band.color}" ` +
        `fill-opacity="0.25" stroke="none"/>`,
    );
  }

  let legendY = MARGIN.top + 14;
  for (const series of spec.series) {
    const coords = series.points
      .map((p) => `${px(p.x).toFixed(1)},${py(p.y).toFixed(1)}`)
      .join(" ");
    const dash = series.dashed ? ' stroke-dasharray="6 4"' : "";
    if (series.line !== false && series.points.length > 1) {
      parts.push(
        `<polyline points="${coords}" fill="none" stroke="${series.color}" ` +
          `stroke-width="1.8"${dash}/>`,
      );
    }
    if (series.markers !== false) {
      for (const p of series.points) {
        parts.push(
          `<circle cx="${px(p.x).toFixed(1)}" cy="${py(p.y).toFixed(1)}" r="3.2" ` +
            `fill="${series.color}"/>`,
        );
      }
    }
    parts.push(
      `<line x1="${MARGIN.left + plotW - 150}" y1="${legendY}" ` +
        `x2="${MARGIN.left + plotW - 126}" y2="${legendY}" stroke="${series.color}" ` +
        `stroke-width="2"${dash}/>`,
      `<text x="${MARGIN.left + plotW - 120}" y="${legendY + 4}" font-size="11">` +
        `${series.label}</text>`,
    );
    legendY += 16;
  }

  let noteY = HEIGHT - MARGIN.bottom + 34;
  for (const note of spec.notes ?? []) {
    parts.push(
      `<text x="${MARGIN.left}" y="${noteY}" font-size="11" fill="#555555">${note}</text>`,
    );
    noteY += 14;
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
