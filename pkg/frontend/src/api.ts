/**
 * Typed client for the results API.
 *
 * The dashboard performs no statistical computation: every number it
 * renders comes from one of these responses.
 */

export interface ManifestMetric {
  name: string;
  orientation: "higher" | "lower";
}

export interface Manifest {
  datasets: string[];
  methods: string[];
  metrics: ManifestMetric[];
  experiments: string[];
}

export interface CurvePoint {
  ratio: number;
  n_features: number | null;
  mean: number;
  std: number;
}

export interface Curve {
  method: string;
  datasets: string[];
  points: CurvePoint[];
}

export interface CurvesResponse {
  metric: string;
  experiment: string;
  orientation: "higher" | "lower";
  curves: Curve[];
}

export interface FsdemRow {
  dataset: string;
  method: string;
  metric: string;
  fsdem: number | null;
  stability: number | null;
}

export interface FsdemResponse {
  experiment: string;
  rows: FsdemRow[];
}

export interface RanksResponse {
  metric: string;
  experiment: string;
  stat: "standard" | "mars";
  alpha: number;
  n_datasets: number;
  methods: string[];
  avg_ranks: Record<string, number>;
  friedman_stat: number;
  cd_value: number;
  cliques: string[][];
  dropped_datasets: string[];
}

export interface TimingRow {
  method: string;
  axis: string;
  n_instances: number;
  n_features: number;
  seconds: number;
  timed_out: boolean;
}

export interface TimingsResponse {
  axis: string;
  rows: TimingRow[];
}

export interface ImportReject {
  line: number;
  error: string;
}

export interface ImportResponse {
  accepted_rows: number;
  rejected_rows: ImportReject[];
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

function query(params: Record<string, string | undefined>): string {
  const pairs = Object.entries(params).filter(([, v]) => v !== undefined && v !== "");
  if (pairs.length === 0) return "";
  return "?" + pairs.map(([k, v]) => `${k}=${encodeURIComponent(v as string)}`).join("&");
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, init);
    if (!resp.ok) {
      let message = `${resp.status} ${resp.statusText}`;
      try {
        const body = (await resp.json()) as { error?: string };
        if (body.error) message = body.error;
      } catch {
        // non-JSON error body: keep the status line
      }
      throw new ApiError(resp.status, message);
    }
    return (await resp.json()) as T;
  }

  manifest(): Promise<Manifest> {
    return this.request<Manifest>("/api/manifest");
  }

  curves(metric: string, experiment: string, exclude: string[], dataset?: string): Promise<CurvesResponse> {
    return this.request<CurvesResponse>(
      "/api/curves" + query({ metric, experiment, exclude: exclude.join(","), dataset }),
    );
  }

  fsdem(experiment: string, exclude: string[]): Promise<FsdemResponse> {
    return this.request<FsdemResponse>("/api/fsdem" + query({ experiment, exclude: exclude.join(",") }));
  }

  ranks(
    metric: string,
    experiment: string,
    stat: string,
    alpha: number,
    exclude: string[],
  ): Promise<RanksResponse> {
    return this.request<RanksResponse>(
      "/api/ranks" + query({ metric, experiment, stat, alpha: alpha.toFixed(2), exclude: exclude.join(",") }),
    );
  }

  timings(axis: string): Promise<TimingsResponse> {
    return this.request<TimingsResponse>("/api/timings" + query({ axis }));
  }

  async exportLatex(
    kind: "ranks" | "fsdem",
    metric: string,
    experiment: string,
    stat: string,
    alpha: number,
    exclude: string[],
  ): Promise<string> {
    const path =
      "/api/export/latex" +
      query({ kind, metric, experiment, stat, alpha: alpha.toFixed(2), exclude: exclude.join(",") });
    const resp = await fetch(this.base + path);
    if (!resp.ok) throw new ApiError(resp.status, await resp.text());
    return resp.text();
  }

  importCsv(text: string): Promise<ImportResponse> {
    return this.request<ImportResponse>("/api/import", {
      method: "POST",
      headers: { "Content-Type": "text/csv" },
      body: text,
    });
  }
}
