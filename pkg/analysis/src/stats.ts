// Recomputes the aggregates the simulator publishes in summary.json
// from the raw per-flow CSV. Bin edges and percentile ranks use integer
// arithmetic only (all values stay far below 2^53), so results match
// the summary digit for digit.

import { FlowRow, RunSummary } from './types.js';

/** Lower edge of the histogram bin holding v: 16 sub-bins per octave.
 * v must be a positive integer. */
export function histBinEdge(v: number): number {
  if (!Number.isInteger(v) || v < 1) {
    throw new Error(`histogram values must be positive integers, got ${v}`);
  }
  let base = 1;
  while (base * 2 <= v) {
    base *= 2;
  }
  const sub = Math.floor(((v - base) * 16) / base);
  return base + Math.floor((sub * base) / 16);
}

export interface BucketAccumulator {
  count: number;
  fctSumPs: number;
  maxFctPs: number;
  histogram: Map<number, number>; // bin edge -> count
}

/** Group completed flows by exact size, excluding warmup arrivals,
 * exactly as the simulator does. */
export function bucketize(rows: FlowRow[], warmupCutoffPs: number): Map<number, BucketAccumulator> {
  const buckets = new Map<number, BucketAccumulator>();
  for (const row of rows) {
    if (row.arrival_ps < warmupCutoffPs) continue;
    let b = buckets.get(row.size_bytes);
    if (b === undefined) {
      b = { count: 0, fctSumPs: 0, maxFctPs: 0, histogram: new Map() };
      buckets.set(row.size_bytes, b);
    }
    b.count += 1;
    b.fctSumPs += row.fct_ps;
    if (row.fct_ps > b.maxFctPs) b.maxFctPs = row.fct_ps;
    const edge = histBinEdge(row.fct_ps);
    b.histogram.set(edge, (b.histogram.get(edge) ?? 0) + 1);
  }
  return buckets;
}

/** Nearest-rank percentile walked over a bin-edge histogram: the edge of
 * the bin holding the rank = max(1, ceil(count * pct / 100)) sample. */
export function percentileFromHist(histogram: Map<number, number>, count: number, pct: number): number {
  const rank = Math.max(1, Math.ceil((count * pct) / 100));
  let cum = 0;
  for (const edge of [...histogram.keys()].sort((a, b) => a - b)) {
    cum += histogram.get(edge)!;
    if (cum >= rank) return edge;
  }
  throw new Error(`rank ${rank} beyond histogram total ${cum}`);
}

export interface BucketStats {
  size: number;
  count: number;
  fctSumPs: number;
  meanFctPs: number;
  p10FctPs: number;
  p99FctPs: number;
  maxFctPs: number;
}

export function bucketStats(rows: FlowRow[], warmupCutoffPs: number): BucketStats[] {
  const out: BucketStats[] = [];
  for (const [size, b] of bucketize(rows, warmupCutoffPs)) {
    out.push({
      size,
      count: b.count,
      fctSumPs: b.fctSumPs,
      meanFctPs: b.fctSumPs / b.count,
      p10FctPs: percentileFromHist(b.histogram, b.count, 10),
      p99FctPs: percentileFromHist(b.histogram, b.count, 99),
      maxFctPs: b.maxFctPs,
    });
  }
  out.sort((a, b) => a.size - b.size);
  return out;
}

/** Recompute every bucket from the CSV and diff against the summary.
 * Returns human-readable mismatch descriptions; empty means the files
 * agree digit for digit. */
export function verifyAggregates(rows: FlowRow[], summary: RunSummary): string[] {
  const problems: string[] = [];
  const recomputed = new Map(bucketStats(rows, summary.warmup_cutoff_ps).map(b => [b.size, b]));
  const claimed = summary.buckets;

  for (const size of Object.keys(claimed)) {
    if (!recomputed.has(Number(size))) problems.push(`bucket ${size} in summary but not in CSV`);
  }
  for (const [size, got] of recomputed) {
    const want = claimed[String(size)];
    if (want === undefined) {
      problems.push(`bucket ${size} in CSV but not in summary`);
      continue;
    }
    const fields: [string, number, number][] = [
      ['count', got.count, want.count],
      ['fct_sum_ps', got.fctSumPs, want.fct_sum_ps],
      ['mean_fct_ps', got.meanFctPs, want.mean_fct_ps],
      ['p10_fct_ps', got.p10FctPs, want.p10_fct_ps],
      ['p99_fct_ps', got.p99FctPs, want.p99_fct_ps],
      ['max_fct_ps', got.maxFctPs, want.max_fct_ps],
    ];
    for (const [name, a, b] of fields) {
      if (a !== b) problems.push(`bucket ${size} ${name}: recomputed ${a}, summary has ${b}`);
    }
  }
  return problems;
}

export function mean(values: number[]): number {
  if (values.length === 0) return NaN;
  let s = 0;
  for (const v of values) s += v;
  return s / values.length;
}
