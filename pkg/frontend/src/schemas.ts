/**
 * Declared column schemas for every table the experiment runner emits.
 * A table is only accepted when its header matches its schema exactly.
 */

export const TABLE_SCHEMAS: Record<string, string[]> = {
  "times.csv": ["d", "n", "r", "p", "trial", "seed", "T_or_never", "rho"],
  "eta.csv": [
    "d", "m", "p", "trials", "bad_count", "eta_hat", "ci_low", "ci_high", "seed",
  ],
  "perc.csv": [
    "d", "n", "boundary", "r", "p", "trials", "perc_count",
    "point", "ci_low", "ci_high", "seed",
  ],
  "pc.csv": [
    "d", "n", "boundary", "r", "trials_per_probe", "tol", "seed", "pc_hat",
  ],
  "bounds.csv": [
    "formula", "d", "r", "n", "p", "t", "t_prime", "m", "L",
    "lam", "delta", "p0", "C", "B", "eta_m",
    "value", "clamped_value", "overflow_flag",
  ],
  "certificates.csv": ["kind", "t", "region", "verified", "T_or_never", "seed"],
  "audit.csv": ["m", "p", "trial_seed", "A", "B", "E", "counterexample_flag"],
};

export type Row = Record<string, string>;

export interface RunMeta {
  config: Record<string, unknown>;
  version: string;
  timestamp: string;
  master_seed: number;
  row_counts: Record<string, number>;
}

export interface ResultBundle {
  directory: string;
  meta: RunMeta;
  tables: Map<string, Row[]>;
}
