/**
 * HTML table builders. Every cell is a formatted API response field;
 * exact values ride along in title attributes.
 */

import type { FsdemResponse, RanksResponse } from "./api";

const esc = (text: string): string =>
  text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export function rankTable(ranks: RanksResponse): string {
  const order = [...ranks.methods].sort((a, b) => ranks.avg_ranks[a] - ranks.avg_ranks[b]);
  const rows = order
    .map(
      (m) =>
        `<tr><td>${esc(m)}</td>` +
        `<td class="num rank-value" data-method="${esc(m)}" title="${ranks.avg_ranks[m]}">` +
        `${ranks.avg_ranks[m].toFixed(4)}</td></tr>`,
    )
    .join("");
  const cliques =
    ranks.cliques.length > 0
      ? ranks.cliques.map((c) => c.join(", ")).join(" | ")
      : "all methods separated";
  const dropped =
    ranks.dropped_datasets.length > 0
      ? `<tr><td colspan="2">dropped incomplete datasets: ${esc(ranks.dropped_datasets.join(", "))}</td></tr>`
      : "";
  return (
    `<table class="rank-table">` +
    `<thead><tr><th>Method</th><th class="num">Avg. rank (${esc(ranks.stat)})</th></tr></thead>` +
    `<tbody>${rows}</tbody>` +
    `<tfoot>` +
    `<tr><td>Friedman statistic</td><td class="num friedman" title="${ranks.friedman_stat}">` +
    `${ranks.friedman_stat.toFixed(4)}</td></tr>` +
    `<tr><td>Critical difference (&alpha;=${ranks.alpha})</td><td class="num cd" title="${ranks.cd_value}">` +
    `${ranks.cd_value.toFixed(4)}</td></tr>` +
    `<tr><td>Datasets</td><td class="num">${ranks.n_datasets}</td></tr>` +
    `<tr><td>Indistinguishable</td><td class="cliques">${esc(cliques)}</td></tr>` +
    dropped +
    `</tfoot></table>`
  );
}

export function fsdemTable(data: FsdemResponse, metric: string): string {
  const rows = data.rows.filter((r) => r.metric === metric);
  if (rows.length === 0) return "";
  const body = rows
    .map(
      (r) =>
        `<tr><td>${esc(r.dataset)}</td><td>${esc(r.method)}</td>` +
        `<td class="num" title="${r.fsdem ?? ""}">${r.fsdem === null ? "-" : r.fsdem.toFixed(4)}</td>` +
        `<td class="num" title="${r.stability ?? ""}">${r.stability === null ? "-" : r.stability.toFixed(4)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="fsdem-table">` +
    `<thead><tr><th>Dataset</th><th>Method</th>` +
    `<th class="num">Curve score (${esc(metric)})</th><th class="num">Stability</th></tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}
