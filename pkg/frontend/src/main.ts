/**
 * CLI: render an SVG figure from harness CSV logs.
 *
 *   node dist/main.js --input run.csv --kind barriers --out fig.svg \
 *       [--slit cx,cy,cz,nx,ny,nz,width]... [--emax J] [--disk-radius m] \
 *       [--ref x,y,z,x,y,z,...] [--every N]
 *
 * Exit codes: 0 success, 1 data/schema error, 2 usage error.  No output
 * file is written unless rendering succeeds.
 */

import { readFileSync, writeFileSync } from 'node:fs'
import process from 'node:process'
import { pathToFileURL } from 'node:url'

import { parseHarnessCsv, SchemaError } from './csv.js'
import {
  figureName,
  FigureOptions,
  renderBarriers,
  renderEnergy,
  renderTrajectory,
  SlitGeometry,
} from './figures.js'

interface Args {
  inputs: string[]
  kind: 'trajectory3d' | 'barriers' | 'energy'
  out: string
  options: FigureOptions
}

class UsageError extends Error {}

function parseNumbers(raw: string, flag: string, count?: number): number[] {
  const vals = raw.split(',').map((s) => Number(s.trim()))
  if (vals.some((v) => !Number.isFinite(v))) {
    throw new UsageError(`${flag}: cannot parse '${raw}' as numbers`)
  }
  if (count !== undefined && vals.length !== count) {
    throw new UsageError(`${flag}: expected ${count} numbers, got ${vals.length}`)
  }
  return vals
}

export function parseArgs(argv: string[]): Args {
  const inputs: string[] = []
  const slits: SlitGeometry[] = []
  let kind: Args['kind'] | null = null
  let out: string | null = null
  let eMax: number | undefined
  let refWaypoints: Array<[number, number, number]> | undefined
  let diskRadius = 3.0
  let every: number | undefined

  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i]
    const next = () => {
      if (i + 1 >= argv.length) throw new UsageError(`${flag} needs a value`)
      return argv[++i]
    }
    switch (flag) {
      case '--input':
        inputs.push(...next().split(',').map((s) => s.trim()).filter(Boolean))
        break
      case '--kind': {
        const k = next()
        if (k !== 'trajectory3d' && k !== 'barriers' && k !== 'energy') {
          throw new UsageError(`unknown figure kind '${k}'`)
        }
        kind = k
        break
      }
      case '--out':
        out = next()
        break
      case '--slit': {
        const v = parseNumbers(next(), '--slit', 7)
        slits.push({
          center: [v[0], v[1], v[2]],
          normal: [v[3], v[4], v[5]],
          width: v[6],
        })
        break
      }
      case '--emax':
        eMax = parseNumbers(next(), '--emax', 1)[0]
        break
      case '--disk-radius':
        diskRadius = parseNumbers(next(), '--disk-radius', 1)[0]
        break
      case '--every':
        every = parseNumbers(next(), '--every', 1)[0]
        break
      case '--ref': {
        const v = parseNumbers(next(), '--ref')
        if (v.length % 3 !== 0 || v.length === 0) {
          throw new UsageError('--ref expects a multiple of 3 numbers')
        }
        refWaypoints = []
        for (let k = 0; k < v.length; k += 3) refWaypoints.push([v[k], v[k + 1], v[k + 2]])
        break
      }
      default:
        throw new UsageError(`unknown flag '${flag}'`)
    }
  }
  if (inputs.length === 0) throw new UsageError('--input is required')
  if (!kind) throw new UsageError('--kind is required')
  if (!out) throw new UsageError('--out is required')
  return { inputs, kind, out, options: { slits, eMax, refWaypoints, diskRadius, every } }
}

export function renderToString(args: Args): string {
  if (args.kind === 'energy') {
    const logs = args.inputs.map((path) => ({
      name: figureName(path),
      log: parseHarnessCsv(readFileSync(path, 'utf8')),
    }))
    return renderEnergy(logs, args.options)
  }
  if (args.inputs.length !== 1) {
    throw new UsageError(`--kind ${args.kind} takes exactly one input CSV`)
  }
  const log = parseHarnessCsv(readFileSync(args.inputs[0], 'utf8'))
  return args.kind === 'barriers'
    ? renderBarriers(log, args.options)
    : renderTrajectory(log, args.options)
}

export function main(argv: string[]): number {
  let args: Args
  try {
    args = parseArgs(argv)
  } catch (err) {
    process.stderr.write(`usage error: ${(err as Error).message}\n`)
    return 2
  }
  try {
    const svg = renderToString(args)
    writeFileSync(args.out, svg)
    process.stderr.write(`wrote ${args.out}\n`)
    return 0
  } catch (err) {
    if (err instanceof SchemaError || (err as NodeJS.ErrnoException).code === 'ENOENT') {
      process.stderr.write(`error: ${(err as Error).message}\n`)
      return 1
    }
    if (err instanceof UsageError) {
      process.stderr.write(`usage error: ${(err as Error).message}\n`)
      return 2
    }
    throw err
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)))
}
