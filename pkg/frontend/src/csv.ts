/**
 * Strict parser for the simulation harness CSV schema.
 *
 * Header layout:
 *   t,px,py,pz,r11..r33,wx,wy,wz,vx,vy,vz,ud1..ud6,u1..u6,<per-cbf>,E
 * where each barrier contributes a triple of columns:
 *   h_<label>,H_<label>,active_<label>        (energy-augmented)
 *   Edir_<label>,Hdir_<label>,active_<label>  (directional)
 */

const BASE_COLUMNS = [
  't', 'px', 'py', 'pz',
  'r11', 'r12', 'r13', 'r21', 'r22', 'r23', 'r31', 'r32', 'r33',
  'wx', 'wy', 'wz', 'vx', 'vy', 'vz',
  'ud1', 'ud2', 'ud3', 'ud4', 'ud5', 'ud6',
  'u1', 'u2', 'u3', 'u4', 'u5', 'u6',
]

export interface BarrierColumns {
  label: string
  kind: 'energy_augmented' | 'directional'
  /** Column index of h (or Edir). */
  primary: number
  /** Column index of H (or Hdir). */
  augmented: number
  active: number
}

export interface HarnessLog {
  header: string[]
  barriers: BarrierColumns[]
  /** One Float64Array per column, length = number of steps. */
  columns: Map<string, Float64Array>
  rows: number
}

export class SchemaError extends Error {}

function parseHeader(header: string[]): BarrierColumns[] {
  for (let i = 0; i < BASE_COLUMNS.length; i++) {
    if (header[i] !== BASE_COLUMNS[i]) {
      throw new SchemaError(
        `column ${i} is '${header[i] ?? '<missing>'}', expected '${BASE_COLUMNS[i]}'`,
      )
    }
  }
  if (header[header.length - 1] !== 'E') {
    throw new SchemaError(`last column is '${header[header.length - 1]}', expected 'E'`)
  }
  const middle = header.slice(BASE_COLUMNS.length, header.length - 1)
  if (middle.length % 3 !== 0) {
    throw new SchemaError(`per-barrier columns must come in triples, got ${middle.length}`)
  }
  const barriers: BarrierColumns[] = []
  for (let k = 0; k < middle.length; k += 3) {
    const at = BASE_COLUMNS.length + k
    const [c1, c2, c3] = [middle[k], middle[k + 1], middle[k + 2]]
    let kind: BarrierColumns['kind']
    let label: string
    if (c1.startsWith('h_') && c2.startsWith('H_')) {
      kind = 'energy_augmented'
      label = c1.slice(2)
      if (c2 !== `H_${label}`) throw new SchemaError(`mismatched pair ${c1},${c2}`)
    } else if (c1.startsWith('Edir_') && c2.startsWith('Hdir_')) {
      kind = 'directional'
      label = c1.slice(5)
      if (c2 !== `Hdir_${label}`) throw new SchemaError(`mismatched pair ${c1},${c2}`)
    } else {
      throw new SchemaError(`unrecognized barrier columns '${c1}', '${c2}'`)
    }
    if (c3 !== `active_${label}`) {
      throw new SchemaError(`expected 'active_${label}', got '${c3}'`)
    }
    barriers.push({ label, kind, primary: at, augmented: at + 1, active: at + 2 })
  }
  return barriers
}

export function parseHarnessCsv(text: string): HarnessLog {
  const lines = text.split('\n').filter((l) => l.trim().length > 0)
  if (lines.length === 0) throw new SchemaError('empty file')
  const header = lines[0].split(',')
  const barriers = parseHeader(header)
  const rows = lines.length - 1
  if (rows === 0) throw new SchemaError('empty log: header but no records')

  const data = header.map(() => new Float64Array(rows))
  for (let r = 0; r < rows; r++) {
    const parts = lines[r + 1].split(',')
    if (parts.length !== header.length) {
      throw new SchemaError(`row ${r + 1} has ${parts.length} fields, expected ${header.length}`)
    }
    for (let c = 0; c < parts.length; c++) {
      const v = Number(parts[c])
      if (!Number.isFinite(v)) {
        throw new SchemaError(`row ${r + 1}, column '${header[c]}': cannot parse '${parts[c]}'`)
      }
      data[c][r] = v
    }
  }
  const columns = new Map<string, Float64Array>()
  header.forEach((name, i) => columns.set(name, data[i]))
  return { header, barriers, columns, rows }
}

export function column(log: HarnessLog, name: string): Float64Array {
  const col = log.columns.get(name)
  if (col === undefined) throw new SchemaError(`missing column '${name}'`)
  return col
}

export function columnMin(values: Float64Array): number {
  let out = Infinity
  for (const v of values) out = Math.min(out, v)
  return out
}

export function columnMax(values: Float64Array): number {
  let out = -Infinity
  for (const v of values) out = Math.max(out, v)
  return out
}
