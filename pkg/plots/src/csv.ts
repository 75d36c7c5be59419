/**
 * Strict CSV reading for the simulator's published output schemas.
 * Values never contain commas or quotes, so a plain split is exact.
 * A file failing schema validation reports the missing column by name.
 */

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    return { header: [], rows: [] };
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  return { header, rows };
}

export function requireColumns(table: Table, required: string[], source: string): void {
  for (const col of required) {
    if (!table.header.includes(col)) {
      throw new Error(`schema violation in ${source}: missing column '${col}'`);
    }
  }
}

/** Rows as records keyed by header name; extra columns are carried along. */
export function records(table: Table): Record<string, string>[] {
  return table.rows.map((row) => {
    const rec: Record<string, string> = {};
    table.header.forEach((name, i) => {
      rec[name] = row[i] ?? "";
    });
    return rec;
  });
}

export const PER_SECOND_COLUMNS = [
  "time_s",
  "protocol",
  "channel",
  "tx_power_dbm",
  "sent",
  "received",
  "pdr",
];

export const SUMMARY_COLUMNS = [
  "protocol",
  "channel",
  "tx_power_dbm",
  "pkt_bytes",
  "seed",
  "avg_delivery_ratio",
  "total_sent",
  "total_received",
  "total_tx_energy_mj",
];

export const PATHLOSS_COLUMNS = ["model", "freq_hz", "d_m", "pl_db"];

export const SWEEP_COLUMNS = ["protocol", "channel", "tx_power_dbm", "avg_delivery_ratio"];
