/**
 * Figure renderers over harness logs.
 *
 * Three kinds:
 *  - barriers: per corridor, the scaled clearance alpha_e*h (= H + E,
 *    arithmetic on logged columns) and the augmented barrier H over
 *    time, with a zero line and shaded in-corridor intervals.
 *  - energy: directional energy curves from several runs overlaid with
 *    the bound line.
 *  - trajectory3d: orthographic projection of the flight path with
 *    periodic disk outlines, corridor planes, and an optional reference
 *    path.
 *
 * Values are taken verbatim from the log; nothing is re-simulated.
 */

import { basename } from 'node:path'

import { column, columnMax, columnMin, HarnessLog, SchemaError } from './csv.js'
import { dataBounds, Frame, SvgDoc } from './svg.js'

export interface SlitGeometry {
  center: [number, number, number]
  normal: [number, number, number]
  width: number
}

export interface FigureOptions {
  slits: SlitGeometry[]
  eMax?: number
  refWaypoints?: Array<[number, number, number]>
  diskRadius: number
  /** Draw a disk outline every N log rows (trajectory figure). */
  every?: number
}

const SERIES_COLORS = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b']

const MARGIN = { left: 56, right: 16, top: 28, bottom: 34 }

function axes(doc: SvgDoc, frame: Frame, xLabel: string, yLabel: string): void {
  const { pixels, data } = frame
  doc.line(pixels.x0, pixels.y1, pixels.x1, pixels.y1, '#444')
  doc.line(pixels.x0, pixels.y0, pixels.x0, pixels.y1, '#444')
  doc.text(pixels.x0, pixels.y1 + 24, `${xLabel}: ${fmt(data.x0)} .. ${fmt(data.x1)}`, 11)
  doc.text(pixels.x0, pixels.y0 - 8, `${yLabel}: ${fmt(data.y0)} .. ${fmt(data.y1)}`, 11)
}

function fmt(v: number): string {
  const a = Math.abs(v)
  if (a !== 0 && (a >= 1e4 || a < 1e-2)) return v.toExponential(2)
  return (Math.round(v * 1000) / 1000).toString()
}

function series(frame: Frame, t: Float64Array, y: Float64Array): Array<[number, number]> {
  const pts: Array<[number, number]> = []
  for (let i = 0; i < t.length; i++) pts.push(frame.point(t[i], y[i]))
  return pts
}

/** Time intervals where the body sits inside a corridor's slab, near it. */
function corridorIntervals(
  log: HarnessLog,
  slit: SlitGeometry,
  radius: number,
): Array<[number, number]> {
  const t = column(log, 't')
  const px = column(log, 'px')
  const py = column(log, 'py')
  const pz = column(log, 'pz')
  const [cx, cy, cz] = slit.center
  const [nx, ny, nz] = slit.normal
  const out: Array<[number, number]> = []
  let start: number | null = null
  for (let i = 0; i < log.rows; i++) {
    const dx = px[i] - cx
    const dy = py[i] - cy
    const dz = pz[i] - cz
    const along = Math.abs(dx * nx + dy * ny + dz * nz)
    const dist = Math.sqrt(dx * dx + dy * dy + dz * dz)
    const inside = along <= slit.width / 2 && dist <= radius
    if (inside && start === null) start = t[i]
    if (!inside && start !== null) {
      out.push([start, t[i]])
      start = null
    }
  }
  if (start !== null) out.push([start, t[log.rows - 1]])
  return out
}

export function renderBarriers(log: HarnessLog, options: FigureOptions): string {
  const alphas = log.barriers.filter((b) => b.kind === 'energy_augmented')
  if (alphas.length === 0) {
    throw new SchemaError('barriers figure needs energy-augmented barrier columns')
  }
  const t = column(log, 't')
  const energy = column(log, 'E')
  const panelH = 190
  const width = 760
  const doc = new SvgDoc(width, MARGIN.top + alphas.length * panelH + MARGIN.bottom)

  alphas.forEach((barrier, idx) => {
    const hCol = log.columns.get(log.header[barrier.primary])!
    const bigH = log.columns.get(log.header[barrier.augmented])!
    // alpha_e * h = H + E, both logged.
    const scaled = new Float64Array(log.rows)
    for (let i = 0; i < log.rows; i++) scaled[i] = bigH[i] + energy[i]

    const top = MARGIN.top + idx * panelH
    const pixels = { x0: MARGIN.left, x1: width - MARGIN.right, y0: top, y1: top + panelH - 46 }
    const [yLo, yHi] = dataBounds([scaled, bigH, new Float64Array([0])])
    const frame = new Frame({ x0: t[0], x1: t[log.rows - 1], y0: yLo, y1: yHi }, pixels)

    const slit = options.slits[idx]
    if (slit) {
      for (const [a, b] of corridorIntervals(log, slit, options.diskRadius)) {
        doc.rect(frame.x(a), pixels.y0, Math.max(1, frame.x(b) - frame.x(a)), pixels.y1 - pixels.y0, '#d62728', 0.15)
      }
    }
    doc.line(frame.x(t[0]), frame.y(0), frame.x(t[log.rows - 1]), frame.y(0), '#999')
    doc.polyline(series(frame, t, scaled), SERIES_COLORS[0])
    doc.polyline(series(frame, t, bigH), SERIES_COLORS[2])
    axes(doc, frame, 't [s]', 'value')
    doc.text(pixels.x1 - 270, pixels.y0 + 14, `${barrier.label}: scaled clearance (blue), H (green)`, 11)
    doc.text(
      pixels.x1 - 270,
      pixels.y0 + 28,
      `min H = ${fmt(columnMin(bigH))} J, min scaled h = ${fmt(columnMin(scaled))}`,
      11,
    )
  })
  return doc.render()
}

export function renderEnergy(
  logs: Array<{ name: string; log: HarnessLog }>,
  options: FigureOptions,
): string {
  const curves: Array<{ name: string; t: Float64Array; e: Float64Array }> = []
  for (const { name, log } of logs) {
    const directional = log.barriers.find((b) => b.kind === 'directional')
    if (!directional) {
      throw new SchemaError(`log '${name}' has no directional barrier columns`)
    }
    curves.push({
      name,
      t: column(log, 't'),
      e: log.columns.get(log.header[directional.primary])!,
    })
  }
  const width = 760
  const height = 360
  const doc = new SvgDoc(width, height)
  const pixels = { x0: MARGIN.left, x1: width - MARGIN.right, y0: MARGIN.top, y1: height - MARGIN.bottom }
  const eMax = options.eMax ?? 1.5
  const [yLo, yHi] = dataBounds([...curves.map((c) => c.e), new Float64Array([0, eMax])])
  const tHi = Math.max(...curves.map((c) => c.t[c.t.length - 1]))
  const frame = new Frame({ x0: 0, x1: tHi, y0: yLo, y1: yHi }, pixels)

  doc.polyline(
    [frame.point(0, eMax), frame.point(tHi, eMax)],
    '#444',
    1.2,
    '6,4',
  )
  doc.text(frame.x(tHi) - 90, frame.y(eMax) - 6, `bound ${fmt(eMax)} J`, 11)
  curves.forEach((curve, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length]
    doc.polyline(series(frame, curve.t, curve.e), color)
    doc.text(pixels.x0 + 10, pixels.y0 + 16 + 14 * i, `${curve.name} (max ${fmt(columnMax(curve.e))} J)`, 11, color)
  })
  axes(doc, frame, 't [s]', 'directional energy [J]')
  return doc.render()
}

/** Orthographic projection with a fixed oblique view. */
function projector(): (x: number, y: number, z: number) => [number, number] {
  const dir = normalize([-0.55, -0.75, -0.36]) // viewing direction
  const worldUp: [number, number, number] = [0, 0, 1]
  const right = normalize(cross(dir, worldUp))
  const up = normalize(cross(right, dir))
  return (x, y, z) => [x * right[0] + y * right[1] + z * right[2], x * up[0] + y * up[1] + z * up[2]]
}

function cross(
  a: [number, number, number],
  b: [number, number, number],
): [number, number, number] {
  return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

function normalize(v: [number, number, number]): [number, number, number] {
  const n = Math.hypot(v[0], v[1], v[2])
  return [v[0] / n, v[1] / n, v[2] / n]
}

function planeBasis(n: [number, number, number]): [[number, number, number], [number, number, number]] {
  const seed: [number, number, number] = Math.abs(n[2]) < 0.9 ? [0, 0, 1] : [1, 0, 0]
  const u = normalize(cross(n, seed))
  const v = normalize(cross(n, u))
  return [u, v]
}

export function renderTrajectory(log: HarnessLog, options: FigureOptions): string {
  const project = projector()
  const px = column(log, 'px')
  const py = column(log, 'py')
  const pz = column(log, 'pz')

  const path2d: Array<[number, number]> = []
  for (let i = 0; i < log.rows; i++) path2d.push(project(px[i], py[i], pz[i]))

  const shapes: Array<{ kind: 'poly' | 'line'; pts: Array<[number, number]>; color: string; fill?: boolean }> = []
  const every = options.every ?? Math.max(1, Math.floor(log.rows / 24))
  const r = options.diskRadius
  const circle = Array.from({ length: 33 }, (_, k) => (2 * Math.PI * k) / 32)
  const rot = ['r11', 'r12', 'r13', 'r21', 'r22', 'r23', 'r31', 'r32', 'r33'].map((c) =>
    column(log, c),
  )
  for (let i = 0; i < log.rows; i += every) {
    // Disk rim: p + r (cos(a) R e1 + sin(a) R e2); the body normal is R e3.
    const e1: [number, number, number] = [rot[0][i], rot[3][i], rot[6][i]]
    const e2: [number, number, number] = [rot[1][i], rot[4][i], rot[7][i]]
    const pts: Array<[number, number]> = circle.map((a) => {
      const cx = px[i] + r * (Math.cos(a) * e1[0] + Math.sin(a) * e2[0])
      const cy = py[i] + r * (Math.cos(a) * e1[1] + Math.sin(a) * e2[1])
      const cz = pz[i] + r * (Math.cos(a) * e1[2] + Math.sin(a) * e2[2])
      return project(cx, cy, cz)
    })
    shapes.push({ kind: 'line', pts, color: '#2ca02c' })
  }

  for (const slit of options.slits) {
    const [u, v] = planeBasis(slit.normal)
    for (const side of [-1, 1]) {
      const c = slit.center.map(
        (ci, k) => ci + (side * slit.width * slit.normal[k]) / 2,
      ) as [number, number, number]
      const half = 1.2 * r
      const cornersigns: Array<[number, number]> = [
        [-1, -1],
        [1, -1],
        [1, 1],
        [-1, 1],
      ]
      const pts = cornersigns.map(([su, sv]) =>
        project(
          c[0] + half * (su * u[0] + sv * v[0]),
          c[1] + half * (su * u[1] + sv * v[1]),
          c[2] + half * (su * u[2] + sv * v[2]),
        ),
      )
      shapes.push({ kind: 'poly', pts, color: '#8899aa', fill: true })
    }
  }

  let ref2d: Array<[number, number]> | null = null
  if (options.refWaypoints && options.refWaypoints.length > 1) {
    ref2d = options.refWaypoints.map(([x, y, z]) => project(x, y, z))
  }

  const everything = [path2d, ...shapes.map((s) => s.pts), ...(ref2d ? [ref2d] : [])]
  const [xLo, xHi] = dataBounds([everything.flat().map((p) => p[0])].map((a) => Float64Array.from(a)))
  const [yLo, yHi] = dataBounds([everything.flat().map((p) => p[1])].map((a) => Float64Array.from(a)))
  const width = 760
  const height = 560
  const doc = new SvgDoc(width, height)
  const pixels = { x0: MARGIN.left, x1: width - MARGIN.right, y0: MARGIN.top, y1: height - MARGIN.bottom }
  const frame = new Frame({ x0: xLo, x1: xHi, y0: yLo, y1: yHi }, pixels)
  const map = (pts: Array<[number, number]>) => pts.map(([x, y]) => frame.point(x, y))

  for (const s of shapes.filter((s) => s.kind === 'poly')) doc.polygon(map(s.pts), s.color, 0.35)
  if (ref2d) doc.polyline(map(ref2d), '#d62728', 1.5, '7,5')
  doc.polyline(map(path2d), '#1f77b4', 2)
  for (const s of shapes.filter((s) => s.kind === 'line')) doc.polyline(map(s.pts), s.color, 0.8)
  doc.text(pixels.x0, pixels.y0 - 8, 'flight path (blue), disk outlines (green), corridor planes (grey)', 11)
  if (ref2d) doc.text(pixels.x0 + 430, pixels.y0 - 8, 'reference (red dashed)', 11, '#d62728')
  return doc.render()
}

export function figureName(path: string): string {
  return basename(path).replace(/\.csv$/, '')
}
