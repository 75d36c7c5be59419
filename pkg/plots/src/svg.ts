/**
 * Minimal deterministic SVG chart scene: fixed canvas, fixed fonts, fixed
 * number formatting, series ordered by their group key. The same inputs
 * always produce byte-identical output.
 */

export const WIDTH = 800;
export const HEIGHT = 500;
const MARGIN = { top: 40, right: 200, bottom: 55, left: 70 };

export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export interface Series {
  key: string;
  points: [number, number][];
}

const fmt = (v: number): string => {
  if (!Number.isFinite(v)) return "0";
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
};

function niceTicks(lo: number, hi: number, n = 5): number[] {
  if (hi <= lo) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const candidates = [step, 2 * step, 2.5 * step, 5 * step, 10 * step];
  const chosen = candidates.find((c) => span / c <= n) ?? 10 * step;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / chosen) * chosen; t <= hi + 1e-12; t += chosen) {
    ticks.push(t);
  }
  return ticks;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logX?: boolean;
  yMin?: number;
  yMax?: number;
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function lineChart(series: Series[], opts: ChartOptions): string {
  const sorted = [...series].sort((a, b) => (a.key < b.key ? -1 : a.key > b.key ? 1 : 0));
  const xs = sorted.flatMap((s) => s.points.map((p) => p[0]));
  const ys = sorted.flatMap((s) => s.points.map((p) => p[1]));
  const tx = opts.logX ? Math.log10 : (v: number) => v;
  let xLo = Math.min(...xs.map(tx));
  let xHi = Math.max(...xs.map(tx));
  if (xHi === xLo) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  let yLo = opts.yMin ?? Math.min(...ys);
  let yHi = opts.yMax ?? Math.max(...ys);
  if (yHi === yLo) {
    yLo -= 0.5;
    yHi += 0.5;
  }
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const px = (x: number) => MARGIN.left + ((tx(x) - xLo) / (xHi - xLo)) * plotW;
  const py = (y: number) => MARGIN.top + (1 - (y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `font-family="monospace" font-size="12">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="15">${esc(opts.title)}</text>`
  );
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333"/>`
  );
  const xticks = opts.logX
    ? niceTicks(xLo, xHi, 5).map((t) => Math.pow(10, t))
    : niceTicks(xLo, xHi, 6);
  for (const t of xticks) {
    const x = px(t);
    if (x < MARGIN.left - 0.5 || x > MARGIN.left + plotW + 0.5) continue;
    parts.push(`<line x1="${fmt(x)}" y1="${MARGIN.top + plotH}" x2="${fmt(x)}" y2="${MARGIN.top + plotH + 5}" stroke="#333"/>`);
    parts.push(
      `<text x="${fmt(x)}" y="${MARGIN.top + plotH + 20}" text-anchor="middle">${fmt(t)}</text>`
    );
  }
  for (const t of niceTicks(yLo, yHi, 5)) {
    const y = py(t);
    if (y < MARGIN.top - 0.5 || y > MARGIN.top + plotH + 0.5) continue;
    parts.push(`<line x1="${MARGIN.left - 5}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="#333"/>`);
    parts.push(
      `<text x="${MARGIN.left - 9}" y="${fmt(y + 4)}" text-anchor="end">${fmt(t)}</text>`
    );
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle">${esc(opts.xLabel)}</text>`
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${esc(opts.yLabel)}</text>`
  );
  sorted.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = [...s.points].sort((a, b) => a[0] - b[0]);
    const path = pts.map(([x, y]) => `${fmt(px(x))},${fmt(py(y))}`).join(" ");
    parts.push(
      `<polyline class="series" points="${path}" fill="none" stroke="${color}" stroke-width="1.5"/>`
    );
    const ly = MARGIN.top + 14 + i * 18;
    parts.push(
      `<line x1="${WIDTH - MARGIN.right + 12}" y1="${ly - 4}" x2="${WIDTH - MARGIN.right + 34}" y2="${ly - 4}" stroke="${color}" stroke-width="2"/>`
    );
    parts.push(`<text x="${WIDTH - MARGIN.right + 40}" y="${ly}">${esc(s.key)}</text>`);
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

export interface Bar {
  key: string;
  value: number;
}

export function barChart(bars: Bar[], opts: ChartOptions): string {
  const sorted = [...bars].sort((a, b) => (a.key < b.key ? -1 : a.key > b.key ? 1 : 0));
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const yLo = opts.yMin ?? 0;
  const yHi = opts.yMax ?? Math.max(...sorted.map((b) => b.value), 1e-9);
  const py = (y: number) => MARGIN.top + (1 - (y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `font-family="monospace" font-size="12">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="15">${esc(opts.title)}</text>`
  );
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`
  );
  for (const t of niceTicks(yLo, yHi, 5)) {
    const y = py(t);
    if (y < MARGIN.top - 0.5 || y > MARGIN.top + plotH + 0.5) continue;
    parts.push(`<line x1="${MARGIN.left - 5}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="#333"/>`);
    parts.push(`<text x="${MARGIN.left - 9}" y="${fmt(y + 4)}" text-anchor="end">${fmt(t)}</text>`);
  }
  const slot = plotW / Math.max(sorted.length, 1);
  sorted.forEach((bar, i) => {
    const color = PALETTE[i % PALETTE.length];
    const x = MARGIN.left + i * slot + slot * 0.15;
    const w = slot * 0.7;
    const y = py(bar.value);
    parts.push(
      `<rect class="bar" x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" ` +
        `height="${fmt(MARGIN.top + plotH - y)}" fill="${color}"/>`
    );
    parts.push(
      `<text x="${fmt(x + w / 2)}" y="${MARGIN.top + plotH + 16}" text-anchor="middle" font-size="10">${esc(bar.key)}</text>`
    );
    parts.push(
      `<text x="${fmt(x + w / 2)}" y="${fmt(y - 4)}" text-anchor="middle" font-size="10">${fmt(bar.value)}</text>`
    );
  });
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${esc(opts.yLabel)}</text>`
  );
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
