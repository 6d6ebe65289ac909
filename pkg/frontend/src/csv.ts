/**
 * Parsing for solver trace CSVs.
 *
 * Traces carry the fixed header
 *   iter,elapsed_s,f,primal_gap,wolfe_gap,active_set_size,cset_size,step_type,restarted
 * optionally prefixed by an `algorithm` column (long-format comparison
 * files). `primal_gap` cells may be empty when no reference value was
 * available.
 */

export const TRACE_FIELDS = [
  "iter",
  "elapsed_s",
  "f",
  "primal_gap",
  "wolfe_gap",
  "active_set_size",
  "cset_size",
  "step_type",
  "restarted",
] as const;

export interface TraceRow {
  algorithm: string;
  iter: number;
  elapsedS: number;
  f: number;
  primalGap: number | null;
  wolfeGap: number;
  activeSetSize: number;
  csetSize: number;
  stepType: string;
  restarted: boolean;
}

function parseNumber(raw: string, field: string, line: number): number {
  const value = Number(raw);
  if (raw === "" || !Number.isFinite(value)) {
    throw new Error(`line ${line}: bad numeric value ${JSON.stringify(raw)} for ${field}`);
  }
  return value;
}

export function parseTraceCsv(text: string, fallbackAlgorithm = "trace"): TraceRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no header");
  }
  const header = lines[0].split(",");
  const withAlgorithm = header[0] === "algorithm";
  const expected = withAlgorithm ? ["algorithm", ...TRACE_FIELDS] : [...TRACE_FIELDS];
  if (header.length !== expected.length || header.some((h, i) => h !== expected[i])) {
    throw new Error(`unexpected header ${JSON.stringify(lines[0])}`);
  }
  if (lines.length === 1) {
    throw new Error("empty CSV: header but no rows");
  }
  const rows: TraceRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== expected.length) {
      throw new Error(`line ${i + 1}: expected ${expected.length} cells, got ${cells.length}`);
    }
    const offset = withAlgorithm ? 1 : 0;
    rows.push({
      algorithm: withAlgorithm ? cells[0] : fallbackAlgorithm,
      iter: parseNumber(cells[offset], "iter", i + 1),
      elapsedS: parseNumber(cells[offset + 1], "elapsed_s", i + 1),
      f: parseNumber(cells[offset + 2], "f", i + 1),
      primalGap: cells[offset + 3] === "" ? null : parseNumber(cells[offset + 3], "primal_gap", i + 1),
      wolfeGap: parseNumber(cells[offset + 4], "wolfe_gap", i + 1),
      activeSetSize: parseNumber(cells[offset + 5], "active_set_size", i + 1),
      csetSize: parseNumber(cells[offset + 6], "cset_size", i + 1),
      stepType: cells[offset + 7],
      restarted: cells[offset + 8] === "1",
    });
  }
  return rows;
}

export function groupByAlgorithm(rows: TraceRow[]): Map<string, TraceRow[]> {
  const groups = new Map<string, TraceRow[]>();
  for (const row of rows) {
    const bucket = groups.get(row.algorithm);
    if (bucket) {
      bucket.push(row);
    } else {
      groups.set(row.algorithm, [row]);
    }
  }
  return groups;
}
