/** Minimal deterministic SVG assembly: no DOM, just strings. */

export interface Box {
  x0: number
  x1: number
  y0: number
  y1: number
}

export class SvgDoc {
  private parts: string[] = []

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  add(fragment: string): void {
    this.parts.push(fragment)
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.5, dash = ''): void {
    const pts = points.map(([x, y]) => `${round(x)},${round(y)}`).join(' ')
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : ''
    this.add(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`,
    )
  }

  polygon(points: Array<[number, number]>, fill: string, opacity = 1.0): void {
    const pts = points.map(([x, y]) => `${round(x)},${round(y)}`).join(' ')
    this.add(`<polygon points="${pts}" fill="${fill}" fill-opacity="${opacity}"/>`)
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.add(
      `<line x1="${round(x1)}" y1="${round(y1)}" x2="${round(x2)}" y2="${round(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"/>`,
    )
  }

  rect(x: number, y: number, w: number, h: number, fill: string, opacity = 1.0): void {
    this.add(
      `<rect x="${round(x)}" y="${round(y)}" width="${round(w)}" height="${round(h)}" ` +
        `fill="${fill}" fill-opacity="${opacity}"/>`,
    )
  }

  text(x: number, y: number, content: string, size = 12, fill = '#222'): void {
    this.add(
      `<text x="${round(x)}" y="${round(y)}" font-size="${size}" ` +
        `font-family="sans-serif" fill="${fill}">${escapeXml(content)}</text>`,
    )
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n<rect width="100%" height="100%" fill="white"/>\n` +
      this.parts.join('\n') +
      '\n</svg>\n'
    )
  }
}

function round(v: number): string {
  return (Math.round(v * 100) / 100).toString()
}

function escapeXml(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
}

/** Affine map from data coordinates to pixel coordinates (y flipped). */
export class Frame {
  constructor(
    readonly data: Box,
    readonly pixels: Box,
  ) {}

  x(v: number): number {
    const { x0, x1 } = this.data
    return this.pixels.x0 + ((v - x0) / (x1 - x0)) * (this.pixels.x1 - this.pixels.x0)
  }

  y(v: number): number {
    const { y0, y1 } = this.data
    return this.pixels.y1 - ((v - y0) / (y1 - y0)) * (this.pixels.y1 - this.pixels.y0)
  }

  point(x: number, y: number): [number, number] {
    return [this.x(x), this.y(y)]
  }
}

export function dataBounds(series: Array<Float64Array | number[]>, pad = 0.05): [number, number] {
  let lo = Infinity
  let hi = -Infinity
  for (const s of series) {
    for (const v of s) {
      lo = Math.min(lo, v)
      hi = Math.max(hi, v)
    }
  }
  if (!(hi > lo)) {
    hi = lo + 1
  }
  const span = hi - lo
  return [lo - pad * span, hi + pad * span]
}
