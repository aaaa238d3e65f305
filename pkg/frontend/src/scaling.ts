/**
 * Percolation-time scaling report: median T against log n / log(1/(1-p))
 * with an interquartile band, the fitted slope, and a per-(n,p) summary
 * whose rho column reproduces the runner's normalization
 * rho = median(T) * ln(1/(1-p)) / ln(n).
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { writeCsv } from "./csv.js";
import { leastSquares, median, quantile } from "./stats.js";
import { ResultBundle } from "./schemas.js";
import { fmt } from "./stats.js";
import { Band, Series, renderChart } from "./svg.js";

export interface ScalingGroup {
  n: number;
  p: number;
  trials: number;
  neverCount: number;
  medianT: number;
  q25: number;
  q75: number;
  rho: number;
  x: number;
}

export interface ScalingReport {
  imagePath: string;
  summaryPath: string;
  groups: ScalingGroup[];
  slope: number;
}

export function scalingGroups(bundle: ResultBundle): ScalingGroup[] {
  const times = bundle.tables.get("times.csv");
  if (!times) {
    throw new Error("scaling report needs times.csv");
  }
  const byKey = new Map<string, { n: number; p: number; ts: number[]; never: number }>();
  for (const row of times) {
    const key = `${row.n}|${row.p}`;
    let group = byKey.get(key);
    if (!group) {
      group = { n: Number(row.n), p: Number(row.p), ts: [], never: 0 };
      byKey.set(key, group);
    }
    if (row.T_or_never === "never") {
      group.never += 1;
    } else {
      group.ts.push(Number(row.T_or_never));
    }
  }
  const groups: ScalingGroup[] = [];
  for (const g of byKey.values()) {
    if (g.ts.length === 0) {
      continue; // nothing percolated in this cell; leave it out of the fit
    }
    const sorted = [...g.ts].sort((a, b) => a - b);
    const med = median(sorted);
    const logQ = Math.log(1 / (1 - g.p));
    groups.push({
      n: g.n,
      p: g.p,
      trials: g.ts.length + g.never,
      neverCount: g.never,
      medianT: med,
      q25: quantile(sorted, 0.25),
      q75: quantile(sorted, 0.75),
      rho: med === 0 ? 0 : (med * logQ) / Math.log(g.n),
      x: Math.log(g.n) / logQ,
    });
  }
  groups.sort((a, b) => a.p - b.p || a.n - b.n);
  if (new Set(groups.map((g) => g.n)).size < 2) {
    throw new Error("scaling report needs at least two distinct n values");
  }
  return groups;
}

export function plotScaling(bundle: ResultBundle, outDir: string): ScalingReport {
  const groups = scalingGroups(bundle);
  const fit = leastSquares(
    groups.map((g) => g.x),
    groups.map((g) => g.medianT),
  );
  const byP = new Map<number, ScalingGroup[]>();
  for (const g of groups) {
    const list = byP.get(g.p) ?? [];
    list.push(g);
    byP.set(g.p, list);
  }
  const palette = ["#1f6fb4", "#b43e1f", "#3d8f4e", "#7a4daf"];
  const series: Series[] = [];
  const bands: Band[] = [];
  let colorIndex = 0;
  for (const [p, list] of [...byP.entries()].sort((a, b) => a[0] - b[0])) {
    const color = palette[colorIndex++ % palette.length];
    series.push({
      label: `median T (p=${p})`,
      color,
      points: list.map((g) => ({ x: g.x, y: g.medianT })),
    });
    bands.push({
      color,
      points: list.map((g) => ({ x: g.x, low: g.q25, high: g.q75 })),
    });
  }
  series.push({
    label: `fit slope ${fit.slope.toFixed(3)}`,
    color: "#777777",
    dashed: true,
    markers: false,
    points: groups.map((g) => ({ x: g.x, y: fit.intercept + fit.slope * g.x })),
  });
  const svg = renderChart({
    title: "Percolation time scaling",
    xLabel: "log n / log(1/(1-p))",
    yLabel: "median percolation time (interquartile band)",
    series,
    bands,
    notes: [
      `fitted slope ${fit.slope.toFixed(4)}, intercept ${fit.intercept.toFixed(4)}`,
    ],
  });
  fs.mkdirSync(outDir, { recursive: true });
  const imagePath = path.join(outDir, "scaling.svg");
  fs.writeFileSync(imagePath, svg, "utf-8");
  const summaryPath = path.join(outDir, "scaling_summary.csv");
  fs.writeFileSync(
    summaryPath,
    writeCsv(
      ["n", "p", "trials", "never_count", "median_T", "q25", "q75", "rho"],
      groups.map((g) => [
        g.n,
        fmt(g.p),
        g.trials,
        g.neverCount,
        fmt(g.medianT),
        fmt(g.q25),
        fmt(g.q75),
        fmt(g.rho),
      ]),
    ),
    "utf-8",
  );
  return { imagePath, summaryPath, groups, slope: fit.slope };
}
