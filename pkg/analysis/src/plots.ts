// Builds echarts option objects for the three standard views and
// renders them server-side to SVG. All builders are pure functions of
// the loaded runs, so identical inputs give identical figure bytes.

import * as echarts from 'echarts';
import { bucketStats, mean } from './stats.js';
import { Run } from './types.js';

const PALETTE = ['#4e79a7', '#e15759', '#59a14f', '#f28e2b', '#b07aa1', '#76b7b2'];
const PS_PER_MS = 1e9;

export function renderSvg(option: object, width = 800, height = 520): string {
  const chart = echarts.init(null as unknown as HTMLElement, null, {
    renderer: 'svg',
    ssr: true,
    width,
    height,
  });
  chart.setOption({ animation: false, ...option });
  const svg = chart.renderToSVGString();
  chart.dispose();
  // zrender numbers its CSS classes with process-global counters, so a
  // second render of the same option gets different class names.
  // Renumber them by first appearance so identical inputs give
  // identical bytes no matter what rendered earlier in the process.
  const seen = new Map<string, string>();
  return svg
    .replace(/\bzr\d+-cls-\d+\b/g, orig => {
      let canon = seen.get(orig);
      if (canon === undefined) {
        canon = `zr-cls-${seen.size}`;
        seen.set(orig, canon);
      }
      return canon;
    })
    // remaining ids (clip paths etc) count per render, only the
    // instance prefix varies
    .replace(/\bzr\d+-/g, 'zr-');
}

interface BandPoint {
  size: number;
  p10Ms: number;
  p99Ms: number;
}

function bandSeries(name: string, color: string, pts: BandPoint[]) {
  // filled p10-p99 polygon; a custom series because stacked-area bands
  // break on log axes
  return {
    name,
    type: 'custom',
    silent: true,
    renderItem: (_params: unknown, api: { coord: (xy: number[]) => number[] }) => {
      const upper = pts.map(p => api.coord([p.size, p.p99Ms]));
      const lower = [...pts].reverse().map(p => api.coord([p.size, p.p10Ms]));
      return {
        type: 'polygon',
        shape: { points: [...upper, ...lower] },
        style: { fill: color, opacity: 0.18 },
      };
    },
    data: [0],
  };
}

/** Mean FCT vs flow size, log-log, one line per run with a p10-p99
 * band. */
export function fctVsSizeOption(runs: Run[]): object {
  if (runs.length === 0) throw new Error('no runs given');
  const series: object[] = [];
  runs.forEach((run, i) => {
    const color = PALETTE[i % PALETTE.length];
    const stats = bucketStats(run.rows, run.summary.warmup_cutoff_ps);
    if (stats.length === 0) throw new Error(`${run.label}: no flows past warmup`);
    series.push(bandSeries(`${run.label} band`, color, stats.map(b => ({
      size: b.size,
      p10Ms: b.p10FctPs / PS_PER_MS,
      p99Ms: b.p99FctPs / PS_PER_MS,
    }))));
    series.push({
      name: run.label,
      type: 'line',
      symbolSize: 5,
      itemStyle: { color },
      lineStyle: { color },
      data: stats.map(b => [b.size, b.meanFctPs / PS_PER_MS]),
    });
  });
  return {
    legend: { data: runs.map(r => r.label), top: 4 },
    grid: { left: 70, right: 24, top: 40, bottom: 55 },
    xAxis: { type: 'log', name: 'flow size (bytes)', nameLocation: 'middle', nameGap: 32 },
    yAxis: { type: 'log', name: 'FCT (ms)', nameLocation: 'middle', nameGap: 50 },
    series,
  };
}

/** Normalized FCT histogram for one exact size bucket, overlaid per
 * run. */
export function fctHistogramOption(runs: Run[], sizeBucket: number, bins = 50): object {
  if (runs.length === 0) throw new Error('no runs given');
  const perRun = runs.map(run => {
    const fcts = run.rows
      .filter(r => r.arrival_ps >= run.summary.warmup_cutoff_ps && r.size_bytes === sizeBucket)
      .map(r => r.fct_ps / PS_PER_MS);
    if (fcts.length === 0) {
      const have = [...new Set(run.rows.map(r => r.size_bytes))].sort((a, b) => a - b);
      throw new Error(
        `${run.label}: no flows in size bucket ${sizeBucket}; buckets present: ${have.join(', ')}`);
    }
    return fcts;
  });

  const all = perRun.flat();
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  // all-equal FCTs collapse to a single bar
  const width = hi > lo ? (hi - lo) / bins : 1;
  const nBins = hi > lo ? bins : 1;

  const series = perRun.map((fcts, i) => {
    const counts = new Array(nBins).fill(0);
    for (const v of fcts) {
      counts[Math.min(nBins - 1, Math.floor((v - lo) / width))] += 1;
    }
    return {
      name: runs[i].label,
      type: 'bar',
      barGap: '-100%',
      itemStyle: { color: PALETTE[i % PALETTE.length], opacity: 0.55 },
      data: counts.map((c, k) => [lo + (k + 0.5) * width, c / fcts.length]),
    };
  });
  return {
    legend: { data: runs.map(r => r.label), top: 4 },
    grid: { left: 70, right: 24, top: 40, bottom: 55 },
    xAxis: { type: 'value', name: 'FCT (ms)', nameLocation: 'middle', nameGap: 32 },
    yAxis: { type: 'value', name: 'fraction of flows', nameLocation: 'middle', nameGap: 50 },
    series,
  };
}

/** Mean FCT against the per-server arrival rate, one point per run.
 * sizeBucket narrows the mean to one flow size; the default averages
 * every aggregated flow. */
export function lambdaSweepOption(runs: Run[], sizeBucket?: number): object {
  if (runs.length === 0) throw new Error('no runs given');
  const shapes = new Set(runs.map(r =>
    `${r.summary.topology.family}/${r.summary.topology.servers}/${r.summary.config.pattern}`));
  if (shapes.size > 1) {
    throw new Error(`runs are not comparable, mixed configs: ${[...shapes].join(' vs ')}`);
  }
  const points = runs.map(run => {
    const lam = run.summary.config.lam;
    if (typeof lam !== 'number') {
      throw new Error(`${run.label}: run was not rate-driven (no lambda in config)`);
    }
    const rows = run.rows.filter(r =>
      r.arrival_ps >= run.summary.warmup_cutoff_ps
      && (sizeBucket === undefined || r.size_bytes === sizeBucket));
    if (rows.length === 0) {
      throw new Error(`${run.label}: no flows to average` +
        (sizeBucket === undefined ? '' : ` in size bucket ${sizeBucket}`));
    }
    return [lam, mean(rows.map(r => r.fct_ps)) / PS_PER_MS];
  });
  if (points.length === 1) {
    console.warn('warning: single lambda value, plotting a degenerate one-point sweep');
  }
  points.sort((a, b) => a[0] - b[0]);
  return {
    grid: { left: 70, right: 24, top: 24, bottom: 55 },
    xAxis: { type: 'value', name: 'arrival rate (flows/s per server)', nameLocation: 'middle', nameGap: 32 },
    yAxis: { type: 'value', name: 'mean FCT (ms)', nameLocation: 'middle', nameGap: 50 },
    series: [{
      type: 'line',
      symbolSize: 7,
      itemStyle: { color: PALETTE[0] },
      data: points,
    }],
  };
}
