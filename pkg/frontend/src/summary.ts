/** Parser for the harness `key = value` summary files. */

export function parseSummary(text: string): Map<string, number> {
  const out = new Map<string, number>()
  for (const raw of text.split('\n')) {
    const line = raw.trim()
    if (!line) continue
    const eq = line.indexOf('=')
    if (eq < 0) throw new Error(`summary line without '=': '${line}'`)
    const key = line.slice(0, eq).trim()
    const value = Number(line.slice(eq + 1).trim())
    if (!Number.isFinite(value)) throw new Error(`summary value for '${key}' is not a number`)
    out.set(key, value)
  }
  return out
}
