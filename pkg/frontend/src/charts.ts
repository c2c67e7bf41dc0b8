/**
 * Pure SVG builders. Data in, markup out; no fetching, no statistics.
 *
 * Charts embed exact values in <title> elements so hovering reveals
 * them, and exported files keep text as text.
 */

import type { CurvesResponse, RanksResponse, TimingRow } from "./api";

export const PALETTE = [
  "#2563eb", "#dc2626", "#059669", "#d97706",
  "#7c3aed", "#0d9488", "#db2777", "#65a30d",
];

const esc = (text: string): string =>
  text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

function niceTicks(lo: number, hi: number, n = 5): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= n) ?? raw;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12; t += step) ticks.push(t);
  return ticks;
}

const fmt = (x: number): string => {
  if (x === 0) return "0";
  const abs = Math.abs(x);
  if (abs >= 1000 || abs < 0.001) return x.toExponential(1);
  return String(Math.round(x * 1000) / 1000);
};

// ---------------------------------------------------------------------------
// metric curves: one line per method, shaded mean +/- std band
// ---------------------------------------------------------------------------

export interface LineChartOptions {
  width?: number;
  height?: number;
}

export function lineChart(data: CurvesResponse, opts: LineChartOptions = {}): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 360;
  const margin = { top: 16, right: 16, bottom: 48, left: 56 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;

  const points = data.curves.flatMap((c) => c.points);
  const xs = points.map((p) => p.ratio);
  const lows = points.map((p) => p.mean - p.std);
  const highs = points.map((p) => p.mean + p.std);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  let yLo = Math.min(...lows);
  let yHi = Math.max(...highs);
  if (yHi === yLo) {
    yLo -= 0.5;
    yHi += 0.5;
  }
  const pad = 0.05 * (yHi - yLo);
  yLo -= pad;
  yHi += pad;

  const sx = (r: number): number => margin.left + (xHi === xLo ? 0.5 : (r - xLo) / (xHi - xLo)) * plotW;
  const sy = (v: number): number => margin.top + (1 - (v - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(`<g font-family="sans-serif" font-size="11" fill="#1f2430">`);

  // axes and ticks
  const axisY = margin.top + plotH;
  parts.push(
    `<line x1="${margin.left}" y1="${axisY}" x2="${margin.left + plotW}" y2="${axisY}" stroke="#667085"/>`,
    `<line x1="${margin.left}" y1="${margin.top}" x2="${margin.left}" y2="${axisY}" stroke="#667085"/>`,
  );
  for (const t of niceTicks(xLo, xHi, 6)) {
    const x = sx(t);
    parts.push(
      `<line x1="${x.toFixed(1)}" y1="${axisY}" x2="${x.toFixed(1)}" y2="${axisY + 4}" stroke="#667085"/>`,
      `<text x="${x.toFixed(1)}" y="${axisY + 16}" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of niceTicks(yLo, yHi, 5)) {
    const y = sy(t);
    parts.push(
      `<line x1="${margin.left}" y1="${y.toFixed(1)}" x2="${margin.left + plotW}" y2="${y.toFixed(1)}" stroke="#eef1f6"/>`,
      `<text x="${margin.left - 6}" y="${(y + 4).toFixed(1)}" text-anchor="end">${fmt(t)}</text>`,
    );
  }
  const yLabel = data.orientation === "lower" ? `${data.metric} (lower is better)` : data.metric;
  parts.push(
    `<text x="${margin.left + plotW / 2}" y="${height - 8}" text-anchor="middle">feature ratio</text>`,
    `<text transform="rotate(-90 14 ${margin.top + plotH / 2})" x="14" y="${margin.top + plotH / 2}" ` +
      `text-anchor="middle">${esc(yLabel)}</text>`,
  );

  // one band + line + markers per method
  data.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const sorted = [...curve.points].sort((a, b) => a.ratio - b.ratio);
    const upper = sorted.map((p) => `${sx(p.ratio).toFixed(1)},${sy(p.mean + p.std).toFixed(1)}`);
    const lower = [...sorted].reverse().map((p) => `${sx(p.ratio).toFixed(1)},${sy(p.mean - p.std).toFixed(1)}`);
    parts.push(
      `<polygon class="band" data-method="${esc(curve.method)}" points="${upper.join(" ")} ${lower.join(" ")}" ` +
        `fill="${color}" opacity="0.14"/>`,
    );
    const line = sorted.map((p) => `${sx(p.ratio).toFixed(1)},${sy(p.mean).toFixed(1)}`).join(" ");
    parts.push(
      `<polyline class="curve" data-method="${esc(curve.method)}" points="${line}" fill="none" ` +
        `stroke="${color}" stroke-width="1.8"/>`,
    );
    for (const p of sorted) {
      const title =
        `${curve.method} @ ratio ${p.ratio}` +
        (p.n_features !== null ? ` (k=${p.n_features})` : "") +
        `: mean ${p.mean}, std ${p.std}`;
      parts.push(
        `<circle cx="${sx(p.ratio).toFixed(1)}" cy="${sy(p.mean).toFixed(1)}" r="3" fill="${color}">` +
          `<title>${esc(title)}</title></circle>`,
      );
    }
  });

  // legend
  data.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const y = margin.top + 14 * i;
    parts.push(
      `<rect x="${margin.left + plotW - 150}" y="${y}" width="10" height="10" fill="${color}"/>`,
      `<text class="legend" x="${margin.left + plotW - 136}" y="${y + 9}">${esc(curve.method)}</text>`,
    );
  });
  parts.push("</g>");

  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">` +
    parts.join("") +
    "</svg>"
  );
}

// ---------------------------------------------------------------------------
// critical-difference diagram
// ---------------------------------------------------------------------------

export function cdDiagram(ranks: RanksResponse, width = 640): string {
  const methods = ranks.methods;
  const k = methods.length;
  const margin = 150;
  const axisY = 80;
  const span = width - 2 * margin;
  const xOf = (rank: number): number => (k === 1 ? margin : margin + ((rank - 1) / (k - 1)) * span);

  const order = [...methods].sort((a, b) => ranks.avg_ranks[a] - ranks.avg_ranks[b] || methods.indexOf(a) - methods.indexOf(b));
  const parts: string[] = [];
  parts.push(`<g font-family="sans-serif" font-size="12" fill="#1f2430">`);
  parts.push(
    `<line x1="${margin}" y1="${axisY}" x2="${margin + span}" y2="${axisY}" stroke="black" stroke-width="1.5"/>`,
  );
  for (let tick = 1; tick <= k; tick++) {
    const x = xOf(tick);
    parts.push(
      `<line x1="${x.toFixed(1)}" y1="${axisY - 5}" x2="${x.toFixed(1)}" y2="${axisY}" stroke="black"/>`,
      `<text x="${x.toFixed(1)}" y="${axisY - 10}" text-anchor="middle">${tick}</text>`,
    );
  }
  if (k > 1) {
    const cdPx = (ranks.cd_value / (k - 1)) * span;
    parts.push(
      `<line class="cd-ruler" x1="${margin}" y1="30" x2="${(margin + cdPx).toFixed(1)}" y2="30" ` +
        `stroke="black" stroke-width="2"/>`,
      `<text x="${margin}" y="22">CD = ${ranks.cd_value.toFixed(4)}</text>`,
    );
  }
  let barY = axisY + 12;
  for (const clique of ranks.cliques) {
    const xs = clique.map((m) => xOf(ranks.avg_ranks[m]));
    parts.push(
      `<line class="clique" x1="${(Math.min(...xs) - 3).toFixed(1)}" y1="${barY}" ` +
        `x2="${(Math.max(...xs) + 3).toFixed(1)}" y2="${barY}" stroke="black" stroke-width="4"/>`,
    );
    barY += 9;
  }
  const labelY = barY + 16;
  const half = Math.ceil(k / 2);
  order.forEach((method, pos) => {
    const rank = ranks.avg_ranks[method];
    const rx = xOf(rank);
    const onLeft = pos < half;
    const ly = onLeft ? labelY + pos * 18 : labelY + (k - 1 - pos) * 18;
    const lx = onLeft ? margin - 10 : margin + span + 10;
    parts.push(
      `<polyline points="${rx.toFixed(1)},${axisY} ${rx.toFixed(1)},${ly} ${lx},${ly}" fill="none" stroke="black"/>`,
      `<text class="method-label" x="${onLeft ? lx - 4 : lx + 4}" y="${ly + 4}" ` +
        `text-anchor="${onLeft ? "end" : "start"}">${esc(method)} (${rank.toFixed(3)})</text>`,
    );
  });
  parts.push("</g>");
  const height = labelY + half * 18 + 20;
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height.toFixed(0)}" ` +
    `viewBox="0 0 ${width} ${height.toFixed(0)}">` +
    parts.join("") +
    "</svg>"
  );
}

// ---------------------------------------------------------------------------
// runtime scaling plot (log-log)
// ---------------------------------------------------------------------------

export function timingsChart(rows: TimingRow[], axis: "features" | "instances", width = 640, height = 360): string {
  const margin = { top: 16, right: 16, bottom: 48, left: 64 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const sizeOf = (r: TimingRow): number => (axis === "features" ? r.n_features : r.n_instances);

  const xs = rows.map((r) => Math.log10(sizeOf(r)));
  const ys = rows.map((r) => Math.log10(Math.max(r.seconds, 1e-9)));
  const xLo = Math.floor(Math.min(...xs));
  const xHi = Math.ceil(Math.max(...xs));
  const yLo = Math.floor(Math.min(...ys));
  const yHi = Math.ceil(Math.max(...ys));

  const sx = (lx: number): number => margin.left + ((lx - xLo) / Math.max(xHi - xLo, 1e-9)) * plotW;
  const sy = (ly: number): number => margin.top + (1 - (ly - yLo) / Math.max(yHi - yLo, 1e-9)) * plotH;

  const parts: string[] = [];
  parts.push(`<g font-family="sans-serif" font-size="11" fill="#1f2430">`);
  const axisYpx = margin.top + plotH;
  parts.push(
    `<line x1="${margin.left}" y1="${axisYpx}" x2="${margin.left + plotW}" y2="${axisYpx}" stroke="#667085"/>`,
    `<line x1="${margin.left}" y1="${margin.top}" x2="${margin.left}" y2="${axisYpx}" stroke="#667085"/>`,
  );
  for (let e = xLo; e <= xHi; e++) {
    const x = sx(e);
    parts.push(
      `<line x1="${x.toFixed(1)}" y1="${axisYpx}" x2="${x.toFixed(1)}" y2="${axisYpx + 4}" stroke="#667085"/>`,
      `<text x="${x.toFixed(1)}" y="${axisYpx + 16}" text-anchor="middle">1e${e}</text>`,
    );
  }
  for (let e = yLo; e <= yHi; e++) {
    const y = sy(e);
    parts.push(
      `<line x1="${margin.left}" y1="${y.toFixed(1)}" x2="${margin.left + plotW}" y2="${y.toFixed(1)}" stroke="#eef1f6"/>`,
      `<text x="${margin.left - 6}" y="${(y + 4).toFixed(1)}" text-anchor="end">1e${e}</text>`,
    );
  }
  parts.push(
    `<text x="${margin.left + plotW / 2}" y="${height - 8}" text-anchor="middle">n_${axis} (log)</text>`,
    `<text transform="rotate(-90 14 ${margin.top + plotH / 2})" x="14" y="${margin.top + plotH / 2}" ` +
      `text-anchor="middle">seconds (log)</text>`,
  );

  const methods = [...new Set(rows.map((r) => r.method))].sort();
  methods.forEach((method, i) => {
    const color = PALETTE[i % PALETTE.length];
    const mine = rows.filter((r) => r.method === method).sort((a, b) => sizeOf(a) - sizeOf(b));
    const line = mine
      .map((r) => `${sx(Math.log10(sizeOf(r))).toFixed(1)},${sy(Math.log10(Math.max(r.seconds, 1e-9))).toFixed(1)}`)
      .join(" ");
    parts.push(`<polyline points="${line}" fill="none" stroke="${color}" stroke-width="1.8"/>`);
    for (const r of mine) {
      const cx = sx(Math.log10(sizeOf(r))).toFixed(1);
      const cy = sy(Math.log10(Math.max(r.seconds, 1e-9))).toFixed(1);
      const note = r.timed_out ? " [timed out]" : "";
      parts.push(
        `<circle cx="${cx}" cy="${cy}" r="3.5" fill="${r.timed_out ? "#b91c1c" : color}">` +
          `<title>${esc(`${method}: ${sizeOf(r)} ${axis} -> ${r.seconds}s${note}`)}</title></circle>`,
      );
    }
    const y = margin.top + 14 * i;
    parts.push(
      `<rect x="${margin.left + plotW - 150}" y="${y}" width="10" height="10" fill="${color}"/>`,
      `<text class="legend" x="${margin.left + plotW - 136}" y="${y + 9}">${esc(method)}</text>`,
    );
  });
  parts.push("</g>");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">` +
    parts.join("") +
    "</svg>"
  );
}
