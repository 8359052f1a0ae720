import Papa from "papaparse";

/** One row of the sweep CSV contract produced by `hybridtele sweep`. */
export interface SweepRow {
  direction: string;
  alpha: number;
  r: number;
  t: number;
  avg_fidelity: number;
  avg_fidelity_closed_printed: number | null;
  avg_fidelity_closed_corrected: number | null;
  success_probability: number;
  backend: string;
  convergence_flag: string;
}

export const REQUIRED_COLUMNS = [
  "direction",
  "alpha",
  "r",
  "t",
  "avg_fidelity",
  "avg_fidelity_closed_printed",
  "avg_fidelity_closed_corrected",
  "success_probability",
  "backend",
  "convergence_flag",
] as const;

function toNumber(value: string, column: string, line: number): number {
  const parsed = Number(value);
  if (value === "" || !Number.isFinite(parsed)) {
    throw new Error(`row ${line}: column "${column}" is not a finite number (got "${value}")`);
  }
  return parsed;
}

function toNullableNumber(value: string, column: string, line: number): number | null {
  if (value === "") return null;
  return toNumber(value, column, line);
}

/** Parse and validate sweep CSV text; throws naming any offending header. */
export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`CSV parse error at row ${first.row}: ${first.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const column of REQUIRED_COLUMNS) {
    if (!fields.includes(column)) {
      throw new Error(`missing column: ${column}`);
    }
  }
  if (parsed.data.length === 0) {
    throw new Error("CSV contains no data rows");
  }
  return parsed.data.map((raw, i) => ({
    direction: raw.direction,
    alpha: toNumber(raw.alpha, "alpha", i + 2),
    r: toNumber(raw.r, "r", i + 2),
    t: toNumber(raw.t, "t", i + 2),
    avg_fidelity: toNumber(raw.avg_fidelity, "avg_fidelity", i + 2),
    avg_fidelity_closed_printed: toNullableNumber(
      raw.avg_fidelity_closed_printed, "avg_fidelity_closed_printed", i + 2),
    avg_fidelity_closed_corrected: toNullableNumber(
      raw.avg_fidelity_closed_corrected, "avg_fidelity_closed_corrected", i + 2),
    success_probability: toNumber(raw.success_probability, "success_probability", i + 2),
    backend: raw.backend,
    convergence_flag: raw.convergence_flag,
  }));
}
