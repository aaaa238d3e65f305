/**
 * Critical-probability report: bisection estimates against 1/log n, with
 * the slope-(pi^2/18) reference line when the table is the d=r=2 case
 * (the only case with a known sharp constant); otherwise the reference is
 * omitted and noted.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { writeCsv } from "./csv.js";
import { ResultBundle } from "./schemas.js";
import { fmt } from "./stats.js";
import { Series, renderChart } from "./svg.js";

export const SHARP_CONSTANT_2D = Math.PI ** 2 / 18;

export interface PcPoint {
  n: number;
  invLogN: number;
  pcHat: number;
  reference: number | null;
}

export interface PcReport {
  imagePath: string;
  summaryPath: string;
  points: PcPoint[];
  referenceShown: boolean;
}

export function plotPc(bundle: ResultBundle, outDir: string): PcReport {
  const table = bundle.tables.get("pc.csv");
  if (!table) {
    throw new Error("critical-probability report needs pc.csv");
  }
  const sharp = table.every((row) => row.d === "2" && row.r === "2");
  const points: PcPoint[] = table
    .map((row) => {
      const n = Number(row.n);
      const invLogN = 1 / Math.log(n);
      return {
        n,
        invLogN,
        pcHat: Number(row.pc_hat),
        reference: sharp ? SHARP_CONSTANT_2D * invLogN : null,
      };
    })
    .sort((a, b) => a.invLogN - b.invLogN);

  const series: Series[] = [
    {
      label: "estimated critical probability",
      color: "#1f6fb4",
      points: points.map((pt) => ({ x: pt.invLogN, y: pt.pcHat })),
    },
  ];
  const notes: string[] = [];
  if (sharp) {
    series.push({
      label: "slope pi^2/18 reference",
      color: "#b43e1f",
      dashed: true,
      markers: false,
      points: [
        { x: 0, y: 0 },
        ...points.map((pt) => ({ x: pt.invLogN, y: pt.reference as number })),
      ],
    });
  } else {
    notes.push(
      "no scaling constant is known for this (d, r); reference line omitted",
    );
  }
  const svg = renderChart({
    title: "Critical probability vs 1/log n",
    xLabel: "1 / log n",
    yLabel: "estimated critical probability",
    series,
    notes,
  });
  fs.mkdirSync(outDir, { recursive: true });
  const imagePath = path.join(outDir, "pc.svg");
  fs.writeFileSync(imagePath, svg, "utf-8");
  const summaryPath = path.join(outDir, "pc_summary.csv");
  fs.writeFileSync(
    summaryPath,
    writeCsv(
      ["n", "inv_log_n", "pc_hat", "reference"],
      points.map((pt) => [
        pt.n,
        fmt(pt.invLogN),
        fmt(pt.pcHat),
        pt.reference === null ? "" : fmt(pt.reference),
      ]),
    ),
    "utf-8",
  );
  return { imagePath, summaryPath, points, referenceShown: sharp };
}
