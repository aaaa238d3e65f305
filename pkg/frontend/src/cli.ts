/**
 * Batch report runner: load one result directory, render every report its
 * tables support, and write images plus summary CSVs into a reports/
 * subdirectory (or --out).
 *
 *   node dist/cli.js --in results/sweep [--out results/sweep/reports]
 */

import * as path from "node:path";
import * as process from "node:process";

import { plotEta } from "./eta.js";
import { LoadError, loadResults } from "./load.js";
import { plotPc } from "./pc.js";
import { plotScaling } from "./scaling.js";

function parseArgs(argv: string[]): { inDir: string; outDir: string } {
  let inDir: string | undefined;
  let outDir: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--in") {
      inDir = argv[++i];
    } else if (argv[i] === "--out") {
      outDir = argv[++i];
    } else {
      throw new Error(`unknown argument ${argv[i]}`);
    }
  }
  if (!inDir) {
    throw new Error("usage: --in RESULT_DIR [--out REPORT_DIR]");
  }
  return { inDir, outDir: outDir ?? path.join(inDir, "reports") };
}

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs(argv);
  } catch (error) {
    console.error((error as Error).message);
    return 2;
  }
  let bundle;
  try {
    bundle = loadResults(args.inDir);
  } catch (error) {
    if (error instanceof LoadError) {
      console.error(error.message);
      return 1;
    }
    throw error;
  }
  const produced: string[] = [];
  if (bundle.tables.has("times.csv")) {
    const report = plotScaling(bundle, args.outDir);
    produced.push(report.imagePath, report.summaryPath);
  }
  if (bundle.tables.has("eta.csv")) {
    const report = plotEta(bundle, args.outDir);
    produced.push(report.imagePath, report.summaryPath);
  }
  if (bundle.tables.has("pc.csv")) {
    const report = plotPc(bundle, args.outDir);
    produced.push(report.imagePath, report.summaryPath);
  }
  if (produced.length === 0) {
    console.error("no reportable tables (times.csv, eta.csv, pc.csv) in bundle");
    return 1;
  }
  for (const file of produced) {
    console.log(file);
  }
  return 0;
}

const isDirectRun =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;
if (isDirectRun) {
  process.exit(main(process.argv.slice(2)));
}
