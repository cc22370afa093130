import { describe, expect, it } from 'vitest';
import { bucketize, bucketStats, histBinEdge, mean, percentileFromHist, verifyAggregates } from '../src/stats.js';
import { FlowRow, RunSummary } from '../src/types.js';

function row(partial: Partial<FlowRow>): FlowRow {
  return {
    flow_id: 0, src: 1, dst: 2, size_bytes: 9000, arrival_ps: 0,
    fct_ps: 18758400, retransmissions: 0, paths_used: 1, ...partial,
  };
}

describe('histBinEdge', () => {
  it('matches the simulator on known values', () => {
    // small integers land in their own bins
    for (let v = 1; v <= 16; v++) expect(histBinEdge(v)).toBe(v);
    expect(histBinEdge(8191)).toBe(7936);
    expect(histBinEdge(8192)).toBe(8192);
    expect(histBinEdge(9000)).toBe(8704);
    expect(histBinEdge(1_000_000)).toBe(983_040);
    expect(histBinEdge(18_758_400)).toBe(17_825_792);
  });

  it('brackets its argument and is monotone', () => {
    let prev = 0;
    for (let v = 1; v < 40_000; v += 7) {
      const e = histBinEdge(v);
      expect(e).toBeLessThanOrEqual(v);
      expect(e).toBeGreaterThanOrEqual(prev);
      prev = e;
    }
  });

  it('has 16 bins per octave from 2^4 up', () => {
    const edges = new Set<number>();
    for (let v = 1024; v < 2048; v++) edges.add(histBinEdge(v));
    expect(edges.size).toBe(16);
  });

  it('rejects non-positive and fractional values', () => {
    expect(() => histBinEdge(0)).toThrow();
    expect(() => histBinEdge(-5)).toThrow();
    expect(() => histBinEdge(1.5)).toThrow();
  });
});

describe('percentileFromHist', () => {
  it('agrees with nearest-rank over the sorted raw values', () => {
    // deterministic pseudo-random values, same LCG every run
    let state = 12345n;
    const next = () => {
      state = (state * 6364136223846793005n + 1442695040888963407n) & 0xffffffffffffffffn;
      return Number(state >> 33n) % 1_000_000 + 1;
    };
    const values = Array.from({ length: 500 }, next);
    const hist = new Map<number, number>();
    for (const v of values) {
      const e = histBinEdge(v);
      hist.set(e, (hist.get(e) ?? 0) + 1);
    }
    const sorted = [...values].sort((a, b) => a - b);
    for (const pct of [1, 10, 25, 50, 90, 99, 100]) {
      const rank = Math.max(1, Math.ceil((values.length * pct) / 100));
      expect(percentileFromHist(hist, values.length, pct)).toBe(histBinEdge(sorted[rank - 1]));
    }
  });

  it('single sample: every percentile is its bin', () => {
    const hist = new Map([[983_040, 1]]);
    expect(percentileFromHist(hist, 1, 1)).toBe(983_040);
    expect(percentileFromHist(hist, 1, 99)).toBe(983_040);
  });
});

describe('bucketize', () => {
  it('groups by exact size and skips warmup arrivals', () => {
    const rows = [
      row({ size_bytes: 1000, fct_ps: 100, arrival_ps: 0 }),
      row({ size_bytes: 1000, fct_ps: 200, arrival_ps: 50 }),
      row({ size_bytes: 2000, fct_ps: 300, arrival_ps: 10 }),
      row({ size_bytes: 1000, fct_ps: 999, arrival_ps: 5 }), // warmup
    ];
    const buckets = bucketize(rows, 10);
    expect([...buckets.keys()].sort()).toEqual([1000, 2000]);
    const b = buckets.get(1000)!;
    expect(b.count).toBe(1);
    expect(b.fctSumPs).toBe(200);
    const c = buckets.get(2000)!;
    expect(c.count).toBe(1);
    expect(c.maxFctPs).toBe(300);
  });
});

describe('verifyAggregates', () => {
  const rows = [
    row({ size_bytes: 1000, fct_ps: 1_000_000 }),
    row({ size_bytes: 1000, fct_ps: 2_000_000 }),
    row({ size_bytes: 1000, fct_ps: 4_000_000 }),
  ];

  function summaryFor(r: FlowRow[]): RunSummary {
    const [b] = bucketStats(r, 0);
    return {
      schema: 'dcnsim-summary-1',
      warmup_cutoff_ps: 0,
      totals: {} as RunSummary['totals'],
      buckets: {
        '1000': {
          count: b.count,
          fct_sum_ps: b.fctSumPs,
          mean_fct_ps: b.meanFctPs,
          p10_fct_ps: b.p10FctPs,
          p99_fct_ps: b.p99FctPs,
          max_fct_ps: b.maxFctPs,
          histogram: {},
        },
      },
      aborted: false,
      config: {},
      topology: { family: 'x', routers: 1, servers: 2, links: 0, network_degree_max: 0 },
      healthy: true,
    };
  }

  it('passes on agreeing files', () => {
    expect(verifyAggregates(rows, summaryFor(rows))).toEqual([]);
  });

  it('names the field that disagrees', () => {
    const s = summaryFor(rows);
    s.buckets['1000'].p99_fct_ps += 1;
    const problems = verifyAggregates(rows, s);
    expect(problems).toHaveLength(1);
    expect(problems[0]).toContain('p99_fct_ps');
  });

  it('flags buckets missing from either side', () => {
    const s = summaryFor(rows);
    s.buckets['2000'] = s.buckets['1000'];
    expect(verifyAggregates(rows, s).some(p => p.includes('bucket 2000'))).toBe(true);
  });
});

describe('mean', () => {
  it('is the arithmetic mean', () => {
    expect(mean([1, 2, 9])).toBe(4);
    expect(mean([])).toBeNaN();
  });
});
