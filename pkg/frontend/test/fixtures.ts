/**
 * Test fixtures: produce real harness outputs by invoking the Python
 * CLI, the only interface this package consumes.
 */

import { execFileSync } from 'node:child_process'
import { mkdtempSync, readFileSync } from 'node:fs'
import { tmpdir } from 'node:os'
import { join, resolve } from 'node:path'

const REPO_ROOT = resolve(__dirname, '..', '..')

export interface RunOutput {
  csvPath: string
  csv: string
  summary: string
}

export function runHarness(args: string[], basename: string): RunOutput {
  const outDir = mkdtempSync(join(tmpdir(), 'se3cbf-fig-'))
  execFileSync('python3', ['-m', 'se3cbf.cli', ...args, '--out', outDir], {
    cwd: REPO_ROOT,
    stdio: ['ignore', 'ignore', 'inherit'],
  })
  const csvPath = join(outDir, `${basename}.csv`)
  return {
    csvPath,
    csv: readFileSync(csvPath, 'utf8'),
    summary: readFileSync(join(outDir, `${basename}.summary.txt`), 'utf8'),
  }
}

/** Tiny synthetic log in the harness schema for parser edge cases. */
export function syntheticCsv(rows: number, withBarrier = true): string {
  const base =
    't,px,py,pz,r11,r12,r13,r21,r22,r23,r31,r32,r33,' +
    'wx,wy,wz,vx,vy,vz,ud1,ud2,ud3,ud4,ud5,ud6,u1,u2,u3,u4,u5,u6'
  const header = withBarrier ? `${base},h_s1,H_s1,active_s1,E` : `${base},E`
  const lines = [header]
  for (let i = 0; i < rows; i++) {
    const vals: number[] = [i * 1e-3, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1]
    while (vals.length < 31) vals.push(0)
    if (withBarrier) vals.push(1.0, 2.0, 0)
    vals.push(0.5)
    lines.push(vals.join(','))
  }
  return lines.join('\n') + '\n'
}
