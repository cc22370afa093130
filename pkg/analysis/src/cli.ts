#!/usr/bin/env node
// dcnsim-plot: render simulation run outputs to SVG figures.
//
//   dcnsim-plot fct-vs-size runA/ runB/ -o fig.svg
//   dcnsim-plot fct-histogram runA/ runB/ --size 600000 -o fig.svg
//   dcnsim-plot lambda-sweep lam40/ lam50/ lam60/ -o fig.svg
//   dcnsim-plot verify runA/

import { writeFileSync } from 'fs';
import { parseArgs } from 'util';
import { loadRun } from './csv.js';
import { fctHistogramOption, fctVsSizeOption, lambdaSweepOption, renderSvg } from './plots.js';
import { verifyAggregates } from './stats.js';
import { Run } from './types.js';

const USAGE = `usage: dcnsim-plot <command> <run>... [options]

commands:
  fct-vs-size <run>...     mean FCT vs flow size (log-log) with p10-p99 bands
  fct-histogram <run>...   normalized FCT histogram for one size bucket (needs --size)
  lambda-sweep <run>...    mean FCT vs per-server arrival rate, one run per rate
  verify <run>...          recompute summary aggregates from the CSV and diff digit-exactly

options:
  -o, --out FILE   output SVG file (required for the plot commands)
      --width N    figure width in px (default 800)
      --height N   figure height in px (default 520)
      --size N     flow size bucket in bytes (fct-histogram: required;
                   lambda-sweep: optional, default all flows)
      --bins N     histogram bin count (default 50)`;

function fail(msg: string): never {
  console.error(`error: ${msg}`);
  console.error(USAGE);
  process.exit(2);
}

function toInt(name: string, raw: string): number {
  const v = Number(raw);
  if (!Number.isInteger(v) || v <= 0) fail(`--${name} wants a positive integer, got "${raw}"`);
  return v;
}

function loadAll(paths: string[]): Run[] {
  if (paths.length === 0) fail('give at least one run directory');
  return paths.map(p => loadRun(p));
}

const spec = {
  out: { type: 'string', short: 'o' },
  width: { type: 'string', default: '800' },
  height: { type: 'string', default: '520' },
  size: { type: 'string' },
  bins: { type: 'string', default: '50' },
} as const;

function parse(args: string[]) {
  try {
    return parseArgs({ args, options: spec, allowPositionals: true, strict: true });
  } catch (err) {
    fail((err as Error).message);
  }
}

const argv = process.argv.slice(2);
const command = argv[0];
if (!command || command === '-h' || command === '--help' || command === 'help') {
  console.log(USAGE);
  process.exit(command ? 0 : 2);
}
const { values, positionals } = parse(argv.slice(1));

function emit(option: object) {
  if (!values.out) fail('--out is required');
  writeFileSync(values.out, renderSvg(option, toInt('width', values.width), toInt('height', values.height)));
  console.error(`wrote ${values.out}`);
}

try {
  switch (command) {
    case 'fct-vs-size':
      emit(fctVsSizeOption(loadAll(positionals)));
      break;
    case 'fct-histogram':
      if (values.size === undefined) fail('fct-histogram needs --size');
      emit(fctHistogramOption(loadAll(positionals), toInt('size', values.size), toInt('bins', values.bins)));
      break;
    case 'lambda-sweep':
      emit(lambdaSweepOption(loadAll(positionals),
        values.size === undefined ? undefined : toInt('size', values.size)));
      break;
    case 'verify': {
      let bad = 0;
      for (const run of loadAll(positionals)) {
        const problems = verifyAggregates(run.rows, run.summary);
        if (problems.length === 0) {
          console.log(`${run.label}: ok (${run.rows.length} flows)`);
        } else {
          bad += 1;
          console.log(`${run.label}: MISMATCH`);
          for (const p of problems) console.log(`  ${p}`);
        }
      }
      process.exitCode = bad === 0 ? 0 : 1;
      break;
    }
    default:
      fail(`unknown command: ${command}`);
  }
} catch (err) {
  // data errors from loading or plotting: message only, no usage spam
  console.error(`error: ${(err as Error).message}`);
  process.exit(2);
}
