/**
 * View renderers: idempotent functions of (SessionState, API responses).
 *
 * Each renderer owns one panel, replaces its content wholesale, and
 * flags the panel's export buttons according to whether anything is
 * drawn (exporting an empty view is disabled).
 */

import { ApiClient, ApiError } from "./api";
import { cdDiagram, lineChart, timingsChart } from "./charts";
import { exclusions, SessionState } from "./state";
import { fsdemTable, rankTable } from "./tables";

function noData(root: HTMLElement, message: string): void {
  root.innerHTML = `<div class="no-data">${message}</div>`;
  root.dataset.empty = "true";
}

function failed(root: HTMLElement, error: unknown): void {
  const message = error instanceof Error ? error.message : String(error);
  root.innerHTML = `<div class="view-message error">${message}</div>`;
  root.dataset.empty = "true";
}

function guidance(root: HTMLElement, message: string): void {
  root.innerHTML = `<div class="view-message">${message}</div>`;
  root.dataset.empty = "true";
}

export async function renderCurves(root: HTMLElement, state: SessionState, api: ApiClient): Promise<void> {
  try {
    const data = await api.curves(state.metric, state.experiment, exclusions(state));
    if (data.curves.length === 0) {
      noData(root, "no data for this selection");
      return;
    }
    root.innerHTML = lineChart(data);
    root.dataset.empty = "false";
  } catch (error) {
    if (error instanceof ApiError && error.status === 400) {
      noData(root, "no data for this selection");
      return;
    }
    failed(root, error);
  }
}

export async function renderFsdem(root: HTMLElement, state: SessionState, api: ApiClient): Promise<void> {
  try {
    const data = await api.fsdem(state.experiment, exclusions(state));
    const table = fsdemTable(data, state.metric);
    if (!table) {
      noData(root, "no curve summaries for this selection");
      return;
    }
    root.innerHTML = table;
    root.dataset.empty = "false";
  } catch (error) {
    if (error instanceof ApiError && error.status === 400) {
      noData(root, "no curve summaries for this selection");
      return;
    }
    failed(root, error);
  }
}

export async function renderRanks(root: HTMLElement, state: SessionState, api: ApiClient): Promise<void> {
  try {
    const data = await api.ranks(state.metric, state.experiment, state.stat, state.alpha, exclusions(state));
    root.innerHTML = rankTable(data) + `<div class="cd-holder">${cdDiagram(data)}</div>`;
    root.dataset.empty = "false";
  } catch (error) {
    if (error instanceof ApiError && error.status === 400 && /fewer than 2/.test(error.message)) {
      guidance(root, "rank analysis needs at least 2 methods and 2 complete datasets; relax the filters");
      return;
    }
    failed(root, error);
  }
}

export async function renderTimings(root: HTMLElement, state: SessionState, api: ApiClient): Promise<void> {
  try {
    const data = await api.timings(state.timingsAxis);
    const rows = data.rows.filter(
      (r) => !state.excludedMethods.has(r.method),
    );
    if (rows.length === 0) {
      noData(root, "no timing measurements for this axis");
      return;
    }
    root.innerHTML = timingsChart(rows, state.timingsAxis);
    root.dataset.empty = "false";
  } catch (error) {
    failed(root, error);
  }
}

export interface Panels {
  curves: HTMLElement;
  fsdem: HTMLElement;
  ranks: HTMLElement;
  timings: HTMLElement;
}

export async function renderAll(panels: Panels, state: SessionState, api: ApiClient): Promise<void> {
  await Promise.all([
    renderCurves(panels.curves, state, api),
    renderFsdem(panels.fsdem, state, api),
    renderRanks(panels.ranks, state, api),
    renderTimings(panels.timings, state, api),
  ]);
}
