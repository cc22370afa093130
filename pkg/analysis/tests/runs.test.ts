// End-to-end checks against the committed simulation outputs in ../runs:
// the summary aggregates must be reproducible from the raw CSVs digit
// for digit, and the three standard figures must render from them.

import { execFileSync } from 'child_process';
import { existsSync, mkdtempSync, readdirSync, readFileSync, statSync } from 'fs';
import { tmpdir } from 'os';
import { dirname, join } from 'path';
import { fileURLToPath } from 'url';
import { describe, expect, it } from 'vitest';
import { loadRun } from '../src/csv.js';
import { fctHistogramOption, fctVsSizeOption, lambdaSweepOption, renderSvg } from '../src/plots.js';
import { mean, verifyAggregates } from '../src/stats.js';

const HERE = dirname(fileURLToPath(import.meta.url));
const RUNS = join(HERE, '..', '..', 'runs');
const TOPO_DIR = join(RUNS, 'topologies');
const LAMBDA_DIR = join(RUNS, 'lambda');

function runDirs(parent: string): string[] {
  expect(existsSync(parent), `${parent} missing; regenerate with runs/make.sh`).toBe(true);
  return readdirSync(parent)
    .map(d => join(parent, d))
    .filter(d => statSync(d).isDirectory())
    .sort();
}

describe('committed runs', () => {
  it('every summary is reproducible from its CSV, digit for digit', () => {
    const dirs = [...runDirs(TOPO_DIR), ...runDirs(LAMBDA_DIR)];
    expect(dirs.length).toBeGreaterThanOrEqual(6);
    for (const dir of dirs) {
      const run = loadRun(dir);
      expect(run.summary.healthy).toBe(true);
      const problems = verifyAggregates(run.rows, run.summary);
      expect(problems, `${run.label}: ${problems.join('; ')}`).toEqual([]);
    }
  });

  it('renders the topology comparison panel', () => {
    const runs = runDirs(TOPO_DIR).map(d => loadRun(d));
    const svg = renderSvg(fctVsSizeOption(runs));
    expect(svg).toContain('</svg>');
    expect(svg.length).toBeGreaterThan(2000);
  });

  it('renders the mid-size histogram panel', () => {
    const runs = runDirs(TOPO_DIR).map(d => loadRun(d));
    const svg = renderSvg(fctHistogramOption(runs, 600_000));
    expect(svg).toContain('</svg>');
  });

  it('renders the rate sweep panel and the sweep degrades monotonically', () => {
    const runs = runDirs(LAMBDA_DIR).map(d => loadRun(d));
    expect(runs.length).toBe(3);
    const svg = renderSvg(lambdaSweepOption(runs));
    expect(svg).toContain('</svg>');

    const byLam = runs
      .map(r => ({
        lam: r.summary.config.lam as number,
        meanFct: mean(r.rows.filter(x => x.arrival_ps >= r.summary.warmup_cutoff_ps)
          .map(x => x.fct_ps)),
      }))
      .sort((a, b) => a.lam - b.lam);
    for (let i = 1; i < byLam.length; i++) {
      expect(byLam[i].meanFct).toBeGreaterThan(byLam[i - 1].meanFct);
    }
  });
});

describe('cli', () => {
  const cli = join(HERE, '..', 'dist', 'cli.js');

  it('verify exits 0 on committed runs', () => {
    const out = execFileSync('node', [cli, 'verify', ...runDirs(LAMBDA_DIR)], { encoding: 'utf8' });
    expect(out).toMatch(/ok \(\d+ flows\)/);
  });

  it('writes an SVG figure', () => {
    const out = join(mkdtempSync(join(tmpdir(), 'dcnsim-fig-')), 'fig.svg');
    execFileSync('node', [cli, 'fct-vs-size', ...runDirs(TOPO_DIR), '-o', out]);
    expect(readFileSync(out, 'utf8').startsWith('<svg')).toBe(true);
  });

  it('rejects a bogus command with exit 2', () => {
    let code = 0;
    try {
      execFileSync('node', [cli, 'no-such-command'], { stdio: 'pipe' });
    } catch (e) {
      code = (e as { status: number }).status;
    }
    expect(code).toBe(2);
  });
});
