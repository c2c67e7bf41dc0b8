/**
 * Dashboard bootstrap: load the manifest, build the controls, and keep
 * every panel in sync with the session state. Imports are posted to the
 * server's session memory and dropped on reload.
 */

import { ApiClient, Manifest } from "./api";
import { exportLatex, exportSvg } from "./export";
import { initialState, SessionState, Store } from "./state";
import { Panels, renderAll } from "./views";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

function fillSelect(select: HTMLSelectElement, values: string[], current: string): void {
  select.innerHTML = values.map((v) => `<option value="${v}">${v}</option>`).join("");
  if (values.includes(current)) select.value = current;
}

function fillFilter(
  root: HTMLElement,
  names: string[],
  excluded: Set<string>,
  onToggle: (name: string) => void,
): void {
  root.innerHTML = "";
  for (const name of names) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = !excluded.has(name);
    box.addEventListener("change", () => onToggle(name));
    label.appendChild(box);
    label.appendChild(document.createTextNode(name));
    root.appendChild(label);
  }
}

function buildControls(manifest: Manifest, store: Store): void {
  const metricSel = $<HTMLSelectElement>("metric-select");
  const expSel = $<HTMLSelectElement>("experiment-select");
  const statSel = $<HTMLSelectElement>("stat-select");
  const alphaSel = $<HTMLSelectElement>("alpha-select");
  const axisSel = $<HTMLSelectElement>("timings-axis");

  fillSelect(metricSel, manifest.metrics.map((m) => m.name), store.state.metric);
  fillSelect(expSel, manifest.experiments, store.state.experiment);
  statSel.value = store.state.stat;
  alphaSel.value = store.state.alpha.toFixed(2);
  axisSel.value = store.state.timingsAxis;

  metricSel.onchange = () => store.update({ metric: metricSel.value });
  expSel.onchange = () => store.update({ experiment: expSel.value });
  statSel.onchange = () => store.update({ stat: statSel.value as SessionState["stat"] });
  alphaSel.onchange = () => store.update({ alpha: Number(alphaSel.value) });
  axisSel.onchange = () => store.update({ timingsAxis: axisSel.value as SessionState["timingsAxis"] });

  fillFilter($("method-filter"), manifest.methods, store.state.excludedMethods, (name) =>
    store.toggleExclusion("method", name),
  );
  fillFilter($("dataset-filter"), manifest.datasets, store.state.excludedDatasets, (name) =>
    store.toggleExclusion("dataset", name),
  );
}

function setStatus(message: string, isError: boolean): void {
  const status = $("import-status");
  status.hidden = false;
  status.textContent = message;
  status.classList.toggle("error", isError);
}

function wireImport(api: ApiClient, store: Store, refreshManifest: () => Promise<void>): void {
  const input = $<HTMLInputElement>("import-input");
  input.addEventListener("change", async () => {
    const file = input.files?.[0];
    if (!file) return;
    try {
      const result = await api.importCsv(await file.text());
      const rejected = result.rejected_rows;
      let message = `imported ${result.accepted_rows} row(s) for this session`;
      if (rejected.length > 0) {
        const lines = rejected.map((r) => `line ${r.line}: ${r.error}`).join("; ");
        message += ` - rejected ${rejected.length}: ${lines}`;
      }
      setStatus(message, false);
      store.update({ hasImports: true });
      await refreshManifest(); // imported methods join the filters and views
    } catch (error) {
      setStatus(`import failed, session unchanged: ${error instanceof Error ? error.message : error}`, true);
    } finally {
      input.value = "";
    }
  });
}

function wireExports(api: ApiClient, store: Store, panels: Panels): void {
  const buttons: Array<[string, () => unknown]> = [
    ["export-curves-svg", () => exportSvg(panels.curves, `curves_${store.state.metric}_${store.state.experiment}.svg`)],
    ["export-ranks-svg", () => exportSvg(panels.ranks, `cd_${store.state.stat}_${store.state.metric}_${store.state.experiment}.svg`)],
    ["export-ranks-latex", () => exportLatex(api, store.state, "ranks", "rank_table.tex")],
    ["export-fsdem-latex", () => exportLatex(api, store.state, "fsdem", "curve_summaries.tex")],
  ];
  for (const [id, handler] of buttons) {
    $(id).addEventListener("click", () => void handler());
  }
}

function syncExportButtons(panels: Panels): void {
  const empty = (el: HTMLElement): boolean => el.dataset.empty !== "false";
  ($("export-curves-svg") as HTMLButtonElement).disabled = empty(panels.curves);
  ($("export-ranks-svg") as HTMLButtonElement).disabled = empty(panels.ranks);
  ($("export-ranks-latex") as HTMLButtonElement).disabled = empty(panels.ranks);
  ($("export-fsdem-latex") as HTMLButtonElement).disabled = empty(panels.fsdem);
}

export async function boot(base = ""): Promise<void> {
  const api = new ApiClient(base);
  const manifest = await api.manifest();
  const store = new Store(initialState(manifest));
  const panels: Panels = {
    curves: $("curves-view"),
    fsdem: $("fsdem-view"),
    ranks: $("ranks-view"),
    timings: $("timings-view"),
  };

  const refreshManifest = async (): Promise<void> => {
    buildControls(await api.manifest(), store);
    await renderAll(panels, store.state, api);
    syncExportButtons(panels);
  };

  buildControls(manifest, store);
  wireImport(api, store, refreshManifest);
  wireExports(api, store, panels);
  store.subscribe(() => {
    void renderAll(panels, store.state, api).then(() => syncExportButtons(panels));
  });
  await renderAll(panels, store.state, api);
  syncExportButtons(panels);
}

// auto-boot in the browser; tests import boot() explicitly
if (typeof document !== "undefined" && document.getElementById("curves-view")) {
  void boot();
}
