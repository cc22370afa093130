import { mkdtempSync, writeFileSync } from 'fs';
import { tmpdir } from 'os';
import { join } from 'path';
import { describe, expect, it } from 'vitest';
import { readFlowsCsv, readSummary } from '../src/csv.js';

const HEADER = 'flow_id,src,dst,size_bytes,arrival_ps,fct_ps,retransmissions,paths_used';

function tempCsv(content: string): string {
  const dir = mkdtempSync(join(tmpdir(), 'dcnsim-csv-'));
  const p = join(dir, 'flows.csv');
  writeFileSync(p, content);
  return p;
}

describe('readFlowsCsv', () => {
  it('parses rows with numeric fields', () => {
    const rows = readFlowsCsv(tempCsv(`${HEADER}\n3,10,20,9000,100,1000,2,4\n`));
    expect(rows).toHaveLength(1);
    expect(rows[0]).toEqual({
      flow_id: 3, src: 10, dst: 20, size_bytes: 9000,
      arrival_ps: 100, fct_ps: 1000, retransmissions: 2, paths_used: 4,
    });
  });

  it('rejects a wrong header', () => {
    expect(() => readFlowsCsv(tempCsv('a,b,c\n1,2,3\n'))).toThrow(/expected header/);
  });

  it('rejects an empty file', () => {
    expect(() => readFlowsCsv(tempCsv(''))).toThrow(/empty/);
  });
});

describe('readSummary', () => {
  it('rejects unknown schemas', () => {
    const dir = mkdtempSync(join(tmpdir(), 'dcnsim-sum-'));
    const p = join(dir, 'summary.json');
    writeFileSync(p, JSON.stringify({ schema: 'other-2' }));
    expect(() => readSummary(p)).toThrow(/unknown schema/);
  });
});
