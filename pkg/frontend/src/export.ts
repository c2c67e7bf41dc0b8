/**
 * Export helpers: SVG downloads serialize the live drawing verbatim;
 * LaTeX downloads fetch the server-rendered table so they byte-match
 * the CLI's output for identical parameters.
 */

import { ApiClient } from "./api";
import { exclusions, SessionState } from "./state";

function triggerDownload(content: string, filename: string, mime: string): void {
  const blob = new Blob([content], { type: mime });
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  document.body.appendChild(link);
  link.click();
  link.remove();
  URL.revokeObjectURL(url);
}

/** Serialize the panel's current <svg> exactly as drawn. */
export function exportSvg(view: HTMLElement, filename: string): boolean {
  const svg = view.querySelector("svg");
  if (!svg || view.dataset.empty === "true") return false;
  triggerDownload(svg.outerHTML, filename, "image/svg+xml");
  return true;
}

export async function exportLatex(
  api: ApiClient,
  state: SessionState,
  kind: "ranks" | "fsdem",
  filename: string,
): Promise<boolean> {
  const tex = await api.exportLatex(kind, state.metric, state.experiment, state.stat, state.alpha, exclusions(state));
  triggerDownload(tex, filename, "text/plain");
  return true;
}
