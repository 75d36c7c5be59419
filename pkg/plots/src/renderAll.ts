/**
 * Directory-level batch rendering: one image per figure kind present in a
 * results directory. Inputs are never modified; reruns produce identical
 * bytes; kinds without data are skipped with a warning.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import {
  renderBars,
  renderPathloss,
  renderPowerSweep,
  renderTimeseries,
} from "./figures.js";

export interface RenderedFigure {
  kind: "timeseries" | "bars" | "pathloss" | "powersweep";
  path: string;
}

export function renderAll(
  resultsDir: string,
  outDir?: string,
  warn: (msg: string) => void = (msg) => console.warn(msg)
): RenderedFigure[] {
  if (!fs.existsSync(resultsDir) || !fs.statSync(resultsDir).isDirectory()) {
    throw new Error(`results directory not found: ${resultsDir}`);
  }
  const target = outDir ?? resultsDir;
  const entries = fs.readdirSync(resultsDir).sort();
  const perSecond = entries.filter(
    (name) => name.startsWith("persecond_") && name.endsWith(".csv")
  );
  const hasSummary = entries.includes("summary.csv");
  const hasPathloss = entries.includes("pathloss.csv");
  const hasSweep = entries.includes("sweep_summary.csv");

  if (perSecond.length === 0 && !hasSummary && !hasPathloss && !hasSweep) {
    warn(`no renderable CSVs in ${resultsDir}; nothing to do`);
    return [];
  }
  fs.mkdirSync(target, { recursive: true });
  const read = (name: string) => fs.readFileSync(path.join(resultsDir, name), "utf8");
  const out: RenderedFigure[] = [];
  const write = (kind: RenderedFigure["kind"], svg: string) => {
    const file = path.join(target, `${kind}.svg`);
    fs.writeFileSync(file, svg);
    out.push({ kind, path: file });
  };

  if (perSecond.length > 0) {
    write(
      "timeseries",
      renderTimeseries(perSecond.map((name) => ({ source: name, text: read(name) })))
    );
  } else {
    warn("no per-second CSVs; timeseries skipped");
  }
  if (hasSummary) {
    write("bars", renderBars(read("summary.csv"), "summary.csv"));
  } else {
    warn("no summary.csv; bars skipped");
  }
  if (hasPathloss) {
    write("pathloss", renderPathloss(read("pathloss.csv"), "pathloss.csv"));
  } else {
    warn("no pathloss.csv; pathloss skipped");
  }
  if (hasSweep) {
    write("powersweep", renderPowerSweep(read("sweep_summary.csv"), "sweep_summary.csv"));
  } else {
    warn("no sweep_summary.csv; powersweep skipped");
  }
  return out;
}
