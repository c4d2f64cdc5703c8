/**
 * Parsing and validation of the sweep CSV produced by the core package.
 *
 * The schema is fixed: one header line naming the 13 columns below, then
 * one row per noise-rate grid point with eta strictly increasing.
 */

export const REQUIRED_COLUMNS = [
  "eta", "n_c", "tau", "a",
  "p_s", "p_m", "p_f", "p_c", "p_e", "p_w",
  "c_b", "c_e", "c_s",
] as const;

export type ColumnName = (typeof REQUIRED_COLUMNS)[number];

export type SweepRow = Record<ColumnName, number>;

export interface SweepFrame {
  rows: SweepRow[];
}

/** Parse the sweep CSV text, enforcing schema and eta monotonicity. */
export function parseSweepCsv(text: string): SweepFrame {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: expected a header line");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new Error(
      `missing required column(s): ${missing.join(", ")} ` +
      `(header was: ${header.join(", ")})`,
    );
  }
  const index = new Map(header.map((name, i) => [name, i]));
  if (lines.length === 1) {
    throw new Error("CSV has a header but no data rows");
  }

  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== header.length) {
      throw new Error(
        `row ${i}: expected ${header.length} fields, got ${fields.length}`,
      );
    }
    const row = {} as SweepRow;
    for (const col of REQUIRED_COLUMNS) {
      const raw = fields[index.get(col)!];
      const value = Number(raw);
      if (!Number.isFinite(value)) {
        throw new Error(`row ${i}: column ${col} is not a number: '${raw}'`);
      }
      row[col] = value;
    }
    rows.push(row);
  }

  for (let i = 1; i < rows.length; i++) {
    if (!(rows[i].eta > rows[i - 1].eta)) {
      throw new Error(
        `eta must be strictly increasing: row ${i + 1} has eta=` +
        `${rows[i].eta} after ${rows[i - 1].eta} (is the CSV shuffled?)`,
      );
    }
  }
  return { rows };
}

/** Index and row of the secrecy-capacity maximum. */
export function maxSecrecyRow(frame: SweepFrame): { index: number; row: SweepRow } {
  let best = 0;
  for (let i = 1; i < frame.rows.length; i++) {
    if (frame.rows[i].c_s > frame.rows[best].c_s) {
      best = i;
    }
  }
  return { index: best, row: frame.rows[best] };
}
