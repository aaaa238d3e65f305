import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

export const FIXTURES = path.resolve(
  path.dirname(fileURLToPath(import.meta.url)),
  "../../artifacts/acceptance",
);

export function tmpDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "bootperc-reports-"));
}

/** Write a synthetic result directory with a consistent meta.json. */
export function writeBundle(
  dir: string,
  tables: Record<string, string[]>,
  metaOverride?: Record<string, unknown>,
): void {
  fs.mkdirSync(dir, { recursive: true });
  const rowCounts: Record<string, number> = {};
  for (const [name, lines] of Object.entries(tables)) {
    fs.writeFileSync(path.join(dir, name), lines.join("\n") + "\n", "utf-8");
    rowCounts[name] = lines.length - 1;
  }
  const meta = {
    config: { command: "synthetic" },
    version: "0.1.0",
    timestamp: "2026-01-01T00:00:00+00:00",
    master_seed: 0,
    row_counts: rowCounts,
    ...metaOverride,
  };
  fs.writeFileSync(
    path.join(dir, "meta.json"),
    JSON.stringify(meta, null, 2) + "\n",
    "utf-8",
  );
}
