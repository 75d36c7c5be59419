/**
 * The four figure kinds, each built from one published CSV schema:
 * received-packets time series, delivery-ratio bars, path-loss curves,
 * and delivery-vs-Tx-power lines.
 */

import {
  PATHLOSS_COLUMNS,
  PER_SECOND_COLUMNS,
  SUMMARY_COLUMNS,
  SWEEP_COLUMNS,
  Table,
  parseCsv,
  records,
  requireColumns,
} from "./csv.js";
import { Bar, Series, barChart, lineChart } from "./svg.js";

function load(text: string, source: string, columns: string[]): Record<string, string>[] {
  const table: Table = parseCsv(text);
  requireColumns(table, columns, source);
  return records(table);
}

/** Mean received per second, one line per (protocol, channel), seed-averaged. */
export function renderTimeseries(inputs: { source: string; text: string }[]): string {
  const sums = new Map<string, Map<number, { total: number; n: number }>>();
  for (const input of inputs) {
    for (const rec of load(input.text, input.source, PER_SECOND_COLUMNS)) {
      const key = `${rec.protocol}/${rec.channel}`;
      const t = Number(rec.time_s);
      const perT = sums.get(key) ?? new Map();
      sums.set(key, perT);
      const cell = perT.get(t) ?? { total: 0, n: 0 };
      cell.total += Number(rec.received);
      cell.n += 1;
      perT.set(t, cell);
    }
  }
  const series: Series[] = [...sums.entries()].map(([key, perT]) => ({
    key,
    points: [...perT.entries()].map(
      ([t, cell]) => [t, cell.total / cell.n] as [number, number]
    ),
  }));
  return lineChart(series, {
    title: "Packets received per second",
    xLabel: "time (s)",
    yLabel: "packets received",
    yMin: 0,
  });
}

/** Seed-averaged delivery ratio, one bar per (channel, protocol). */
export function renderBars(text: string, source: string): string {
  const groups = new Map<string, { total: number; n: number }>();
  for (const rec of load(text, source, SUMMARY_COLUMNS)) {
    if (rec.avg_delivery_ratio === "") continue;
    const key = `${rec.channel}/${rec.protocol}`;
    const cell = groups.get(key) ?? { total: 0, n: 0 };
    cell.total += Number(rec.avg_delivery_ratio);
    cell.n += 1;
    groups.set(key, cell);
  }
  const bars: Bar[] = [...groups.entries()].map(([key, cell]) => ({
    key,
    value: cell.total / cell.n,
  }));
  return barChart(bars, {
    title: "Average delivery ratio",
    xLabel: "",
    yLabel: "average delivery ratio",
    yMin: 0,
    yMax: 1,
  });
}

/** Path loss vs log-scaled distance, one curve per (model, frequency). */
export function renderPathloss(text: string, source: string): string {
  const curves = new Map<string, [number, number][]>();
  for (const rec of load(text, source, PATHLOSS_COLUMNS)) {
    const ghz = Number(rec.freq_hz) / 1e9;
    const key = `${rec.model} @ ${ghz.toFixed(1)} GHz`;
    const pts = curves.get(key) ?? [];
    pts.push([Number(rec.d_m), Number(rec.pl_db)]);
    curves.set(key, pts);
  }
  const series: Series[] = [...curves.entries()].map(([key, points]) => ({ key, points }));
  return lineChart(series, {
    title: "Path loss comparison",
    xLabel: "distance (m, log scale)",
    yLabel: "path loss (dB)",
    logX: true,
  });
}

/** Delivery ratio vs Tx power, one line per (protocol, channel). */
export function renderPowerSweep(text: string, source: string): string {
  const curves = new Map<string, [number, number][]>();
  for (const rec of load(text, source, SWEEP_COLUMNS)) {
    if (rec.avg_delivery_ratio === "") continue;
    const key = `${rec.protocol}/${rec.channel}`;
    const pts = curves.get(key) ?? [];
    pts.push([Number(rec.tx_power_dbm), Number(rec.avg_delivery_ratio)]);
    curves.set(key, pts);
  }
  const series: Series[] = [...curves.entries()].map(([key, points]) => ({ key, points }));
  return lineChart(series, {
    title: "Tx power vs delivery ratio",
    xLabel: "tx power (dBm)",
    yLabel: "average delivery ratio",
    yMin: 0,
    yMax: 1,
  });
}
