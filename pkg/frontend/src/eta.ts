/**
 * Bad-cube probability report: estimates with confidence intervals per
 * cube side, overlaid with the closed-form envelope
 * B * m^(d-1) * (1-p)^(2m-8). Points whose interval lies entirely above
 * the envelope are flagged in the summary.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { writeCsv } from "./csv.js";
import { ResultBundle } from "./schemas.js";
import { fmt } from "./stats.js";
import { Band, Series, renderChart } from "./svg.js";

export interface EtaPoint {
  d: number;
  m: number;
  p: number;
  trials: number;
  etaHat: number;
  ciLow: number;
  ciHigh: number;
  bound: number;
  flagged: boolean;
}

export interface EtaReport {
  imagePath: string;
  summaryPath: string;
  points: EtaPoint[];
  flaggedCount: number;
}

export function envelope(m: number, d: number, p: number, B: number): number {
  return B * m ** (d - 1) * (1 - p) ** (2 * m - 8);
}

export function plotEta(
  bundle: ResultBundle,
  outDir: string,
  options: { B?: number } = {},
): EtaReport {
  const table = bundle.tables.get("eta.csv");
  if (!table) {
    throw new Error("eta report needs eta.csv");
  }
  const B = options.B ?? 1.0;
  const points: EtaPoint[] = table.map((row) => {
    const d = Number(row.d);
    const m = Number(row.m);
    const p = Number(row.p);
    const bound = envelope(m, d, p, B);
    const ciLow = Number(row.ci_low);
    return {
      d,
      m,
      p,
      trials: Number(row.trials),
      etaHat: Number(row.eta_hat),
      ciLow,
      ciHigh: Number(row.ci_high),
      bound,
      flagged: ciLow > bound,
    };
  });
  points.sort((a, b) => a.p - b.p || a.m - b.m);

  const palette = ["#1f6fb4", "#b43e1f", "#3d8f4e", "#7a4daf"];
  const series: Series[] = [];
  const bands: Band[] = [];
  const byP = new Map<number, EtaPoint[]>();
  for (const pt of points) {
    const list = byP.get(pt.p) ?? [];
    list.push(pt);
    byP.set(pt.p, list);
  }
  let colorIndex = 0;
  for (const [p, list] of [...byP.entries()].sort((a, b) => a[0] - b[0])) {
    const color = palette[colorIndex++ % palette.length];
    series.push({
      label: `estimate (p=${p})`,
      color,
      points: list.map((pt) => ({ x: pt.m, y: pt.etaHat })),
      line: list.length > 1,
    });
    bands.push({
      color,
      points: list.map((pt) => ({ x: pt.m, low: pt.ciLow, high: pt.ciHigh })),
    });
    series.push({
      label: `envelope B=${B} (p=${p})`,
      color,
      dashed: true,
      markers: false,
      points: list.map((pt) => ({ x: pt.m, y: pt.bound })),
      line: list.length > 1,
    });
  }
  const flaggedCount = points.filter((pt) => pt.flagged).length;
  const svg = renderChart({
    title: "Bad-cube probability vs cube side",
    xLabel: "cube side m",
    yLabel: "estimated bad probability",
    series,
    bands,
    notes: [
      flaggedCount === 0
        ? "no estimate's interval exceeds the envelope"
        : `${flaggedCount} point(s) exceed the envelope (flagged in summary)`,
    ],
  });
  fs.mkdirSync(outDir, { recursive: true });
  const imagePath = path.join(outDir, "eta.svg");
  fs.writeFileSync(imagePath, svg, "utf-8");
  const summaryPath = path.join(outDir, "eta_summary.csv");
  fs.writeFileSync(
    summaryPath,
    writeCsv(
      ["d", "m", "p", "trials", "eta_hat", "ci_low", "ci_high", "bound", "flagged"],
      points.map((pt) => [
        pt.d,
        pt.m,
        fmt(pt.p),
        pt.trials,
        fmt(pt.etaHat),
        fmt(pt.ciLow),
        fmt(pt.ciHigh),
        fmt(pt.bound),
        pt.flagged ? "true" : "false",
      ]),
    ),
    "utf-8",
  );
  return { imagePath, summaryPath, points, flaggedCount };
}
