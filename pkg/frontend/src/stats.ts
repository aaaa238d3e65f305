/** Order statistics and the one least-squares fit the summaries use. */

export function quantile(sorted: number[], q: number): number {
  if (sorted.length === 0) {
    throw new Error("quantile of empty sample");
  }
  // linear interpolation between order statistics (matches numpy's default)
  const position = (sorted.length - 1) * q;
  const lower = Math.floor(position);
  const upper = Math.ceil(position);
  if (lower === upper) {
    return sorted[lower];
  }
  const weight = position - lower;
  return sorted[lower] * (1 - weight) + sorted[upper] * weight;
}

export function median(values: number[]): number {
  return quantile([...values].sort((a, b) => a - b), 0.5);
}

export interface LineFit {
  slope: number;
  intercept: number;
}

export function leastSquares(xs: number[], ys: number[]): LineFit {
  if (xs.length !== ys.length || xs.length === 0) {
    throw new Error("least squares needs matching non-empty samples");
  }
  const n = xs.length;
  const meanX = xs.reduce((a, b) => a + b, 0) / n;
  const meanY = ys.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (xs[i] - meanX) ** 2;
    sxy += (xs[i] - meanX) * (ys[i] - meanY);
  }
  if (sxx === 0) {
    return { slope: 0, intercept: meanY };
  }
  return { slope: sxy / sxx, intercept: meanY - (sxy / sxx) * meanX };
}

/** Format with enough digits to round-trip doubles (mirrors Python repr). */
export function fmt(value: number): string {
  if (Number.isInteger(value) && Math.abs(value) < 1e15) {
    return value.toFixed(1);
  }
  const short = String(value);
  return Number(short) === value ? short : value.toPrecision(17);
}
