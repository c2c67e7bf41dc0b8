/**
 * Session state: the single source of truth for every view.
 *
 * Views re-render from SessionState plus API responses alone, so a
 * reload with the same results bundle (and no imports) reproduces the
 * identical initial view.
 */

import type { Manifest } from "./api";

export type StatFamily = "standard" | "mars";

export interface SessionState {
  metric: string;
  experiment: string;
  stat: StatFamily;
  alpha: number;
  excludedMethods: Set<string>;
  excludedDatasets: Set<string>;
  timingsAxis: "features" | "instances";
  hasImports: boolean;
}

export function initialState(manifest: Manifest): SessionState {
  return {
    metric: manifest.metrics[0]?.name ?? "",
    experiment: manifest.experiments[0] ?? "",
    stat: "standard",
    alpha: 0.05,
    excludedMethods: new Set(),
    excludedDatasets: new Set(),
    timingsAxis: "features",
    hasImports: false,
  };
}

/** Everything currently excluded, in one list (method and dataset names). */
export function exclusions(state: SessionState): string[] {
  return [...state.excludedMethods, ...state.excludedDatasets].sort();
}

export class Store {
  private listeners: Array<(state: SessionState) => void> = [];

  constructor(public state: SessionState) {}

  subscribe(listener: (state: SessionState) => void): void {
    this.listeners.push(listener);
  }

  update(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  toggleExclusion(kind: "method" | "dataset", name: string): void {
    const set = new Set(kind === "method" ? this.state.excludedMethods : this.state.excludedDatasets);
    if (set.has(name)) set.delete(name);
    else set.add(name);
    this.update(kind === "method" ? { excludedMethods: set } : { excludedDatasets: set });
  }
}
