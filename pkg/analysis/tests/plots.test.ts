import { describe, expect, it, vi } from 'vitest';
import { fctHistogramOption, fctVsSizeOption, lambdaSweepOption, renderSvg } from '../src/plots.js';
import { FlowRow, Run, RunSummary } from '../src/types.js';

function makeRun(label: string, rows: Partial<FlowRow>[], config: RunSummary['config'] = {}): Run {
  return {
    label,
    rows: rows.map((r, i) => ({
      flow_id: i, src: 0, dst: 1, size_bytes: 9000, arrival_ps: 0,
      fct_ps: 18758400, retransmissions: 0, paths_used: 1, ...r,
    })),
    summary: {
      schema: 'dcnsim-summary-1',
      warmup_cutoff_ps: 0,
      totals: {} as RunSummary['totals'],
      buckets: {},
      aborted: false,
      config: { pattern: 'permutation', ...config },
      topology: { family: 'slimfly', routers: 50, servers: 100, links: 175, network_degree_max: 7 },
      healthy: true,
    },
  };
}

describe('fctVsSizeOption', () => {
  it('builds a band plus a mean line per run', () => {
    const runs = [
      makeRun('a', [{ size_bytes: 1000, fct_ps: 5_000_000 }, { size_bytes: 9000 }]),
      makeRun('b', [{ size_bytes: 1000, fct_ps: 7_000_000 }]),
    ];
    const opt = fctVsSizeOption(runs) as { series: { type: string }[] };
    expect(opt.series).toHaveLength(4);
    expect(opt.series.map(s => s.type)).toEqual(['custom', 'line', 'custom', 'line']);
  });

  it('a single flow yields a single point', () => {
    const opt = fctVsSizeOption([makeRun('solo', [{}])]) as {
      series: ({ type: string; data?: [number, number][] })[];
    };
    const line = opt.series.find(s => s.type === 'line')!;
    expect(line.data).toEqual([[9000, 18758400 / 1e9]]);
  });

  it('rejects empty input', () => {
    expect(() => fctVsSizeOption([])).toThrow(/no runs/);
  });
});

describe('fctHistogramOption', () => {
  it('all-equal FCTs collapse to one full bar', () => {
    const opt = fctHistogramOption([makeRun('a', [{}, {}, {}])], 9000) as {
      series: { data: [number, number][] }[];
    };
    expect(opt.series[0].data).toHaveLength(1);
    expect(opt.series[0].data[0][1]).toBe(1);
  });

  it('names the missing bucket and lists what exists', () => {
    const run = makeRun('a', [{ size_bytes: 1000 }, { size_bytes: 2000 }]);
    expect(() => fctHistogramOption([run], 5000)).toThrow(/bucket 5000.*1000, 2000/);
  });

  it('normalizes each run to fractions', () => {
    const runs = [makeRun('a', [
      { fct_ps: 1_000_000 }, { fct_ps: 1_000_000 }, { fct_ps: 9_000_000 }, { fct_ps: 9_000_000 },
    ])];
    const opt = fctHistogramOption(runs, 9000, 2) as { series: { data: [number, number][] }[] };
    const fractions = opt.series[0].data.map(d => d[1]);
    expect(fractions.reduce((a, b) => a + b, 0)).toBeCloseTo(1, 12);
  });
});

describe('lambdaSweepOption', () => {
  it('one sorted point per run', () => {
    const runs = [
      makeRun('l60', [{ fct_ps: 6_000_000 }], { lam: 60 }),
      makeRun('l40', [{ fct_ps: 4_000_000 }], { lam: 40 }),
    ];
    const opt = lambdaSweepOption(runs) as { series: { data: [number, number][] }[] };
    expect(opt.series[0].data).toEqual([[40, 0.004], [60, 0.006]]);
  });

  it('warns on a single-point sweep but still renders', () => {
    const warn = vi.spyOn(console, 'warn').mockImplementation(() => {});
    const opt = lambdaSweepOption([makeRun('only', [{}], { lam: 40 })]) as {
      series: { data: unknown[] }[];
    };
    expect(opt.series[0].data).toHaveLength(1);
    expect(warn).toHaveBeenCalledOnce();
    warn.mockRestore();
  });

  it('flags mixed configurations', () => {
    const a = makeRun('a', [{}], { lam: 40 });
    const b = makeRun('b', [{}], { lam: 50 });
    b.summary.topology.servers = 9680;
    expect(() => lambdaSweepOption([a, b])).toThrow(/not comparable/);
  });

  it('rejects runs that were not rate-driven', () => {
    expect(() => lambdaSweepOption([makeRun('fps', [{}])])).toThrow(/no lambda/);
  });
});

describe('renderSvg', () => {
  it('renders deterministic SVG bytes', () => {
    const runs = [makeRun('a', [{ size_bytes: 1000, fct_ps: 5_000_000 }, {}])];
    const svg1 = renderSvg(fctVsSizeOption(runs), 640, 400);
    const svg2 = renderSvg(fctVsSizeOption(runs), 640, 400);
    expect(svg1.startsWith('<svg')).toBe(true);
    expect(svg1).toContain('</svg>');
    expect(svg2).toBe(svg1);
  });
});
