import { readFileSync } from 'fs';
import { basename, dirname, join } from 'path';
import Papa from 'papaparse';
import { FlowRow, Run, RunSummary } from './types.js';

export const FLOW_COLUMNS = [
  'flow_id', 'src', 'dst', 'size_bytes', 'arrival_ps',
  'fct_ps', 'retransmissions', 'paths_used',
];

export function readFlowsCsv(path: string): FlowRow[] {
  const text = readFileSync(path, 'utf8');
  if (text.trim() === '') {
    throw new Error(`${path} is empty`);
  }
  const parsed = Papa.parse<FlowRow>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`${path}: ${e.message} (row ${e.row})`);
  }
  const cols = parsed.meta.fields ?? [];
  if (cols.join(',') !== FLOW_COLUMNS.join(',')) {
    throw new Error(`${path}: expected header ${FLOW_COLUMNS.join(',')}, got ${cols.join(',')}`);
  }
  return parsed.data;
}

export function readSummary(path: string): RunSummary {
  const s = JSON.parse(readFileSync(path, 'utf8')) as RunSummary;
  if (s.schema !== 'dcnsim-summary-1') {
    throw new Error(`${path}: unknown schema ${JSON.stringify(s.schema)}`);
  }
  return s;
}

/** Load flows.csv + summary.json given either the run directory or the
 * CSV path itself. The label defaults to the directory name. */
export function loadRun(path: string, label?: string): Run {
  const dir = path.endsWith('.csv') ? dirname(path) : path;
  return {
    label: label ?? basename(dir),
    rows: readFlowsCsv(join(dir, 'flows.csv')),
    summary: readSummary(join(dir, 'summary.json')),
  };
}
