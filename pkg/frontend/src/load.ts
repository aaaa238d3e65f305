/**
 * Result-directory loader. A bundle is valid when meta.json parses, at
 * least one known table is present, every present table's header matches
 * its declared schema exactly, and row counts agree with meta.json.
 * Validation failures are collected and reported together.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { parseCsv } from "./csv.js";
import { ResultBundle, Row, RunMeta, TABLE_SCHEMAS } from "./schemas.js";

export class LoadError extends Error {
  constructor(public readonly offenders: string[]) {
    super(`result bundle failed validation:\n  ${offenders.join("\n  ")}`);
    this.name = "LoadError";
  }
}

export function loadResults(directory: string): ResultBundle {
  const offenders: string[] = [];
  const metaPath = path.join(directory, "meta.json");
  let meta: RunMeta | undefined;
  if (!fs.existsSync(metaPath)) {
    offenders.push("meta.json: missing");
  } else {
    try {
      meta = JSON.parse(fs.readFileSync(metaPath, "utf-8")) as RunMeta;
      if (typeof meta.row_counts !== "object" || meta.row_counts === null) {
        offenders.push("meta.json: missing row_counts");
      }
    } catch (error) {
      offenders.push(`meta.json: ${(error as Error).message}`);
    }
  }

  const tables = new Map<string, Row[]>();
  for (const [name, schema] of Object.entries(TABLE_SCHEMAS)) {
    const tablePath = path.join(directory, name);
    if (!fs.existsSync(tablePath)) {
      continue;
    }
    let parsed;
    try {
      parsed = parseCsv(fs.readFileSync(tablePath, "utf-8"));
    } catch (error) {
      offenders.push(`${name}: ${(error as Error).message}`);
      continue;
    }
    if (
      parsed.header.length !== schema.length ||
      parsed.header.some((col, i) => col !== schema[i])
    ) {
      offenders.push(
        `${name}: columns [${parsed.header.join(",")}] do not match the ` +
          `declared schema [${schema.join(",")}]`,
      );
      continue;
    }
    const expected = meta?.row_counts?.[name];
    if (expected !== undefined && expected !== parsed.rows.length) {
      offenders.push(
        `${name}: ${parsed.rows.length} rows but meta.json declares ${expected}`,
      );
      continue;
    }
    tables.set(
      name,
      parsed.rows.map((fields) =>
        Object.fromEntries(schema.map((col, i) => [col, fields[i]])),
      ),
    );
  }

  if (tables.size === 0 && offenders.length === 0) {
    offenders.push("no known result tables found");
  }
  if (offenders.length > 0) {
    throw new LoadError(offenders);
  }
  return { directory, meta: meta as RunMeta, tables };
}
