import type { CurvesResponse, FsdemResponse, RanksResponse, TimingRow } from "../src/api";

export const ranksFixture: RanksResponse = {
  metric: "AUC",
  experiment: "10Percent",
  stat: "standard",
  alpha: 0.05,
  n_datasets: 10,
  methods: ["Alpha", "Beta", "Gamma"],
  avg_ranks: { Alpha: 1.25, Beta: 1.85, Gamma: 2.9 },
  friedman_stat: 13.65,
  cd_value: 1.0478131601,
  cliques: [["Alpha", "Beta"]],
  dropped_datasets: [],
};

export const curvesFixture: CurvesResponse = {
  metric: "ACC",
  experiment: "10Percent",
  orientation: "higher",
  curves: [
    {
      method: "Alpha",
      datasets: ["d1"],
      points: [
        { ratio: 0.005, n_features: 1, mean: 0.6, std: 0.05 },
        { ratio: 0.05, n_features: 10, mean: 0.8, std: 0.02 },
        { ratio: 0.1, n_features: 20, mean: 0.9, std: 0.01 },
      ],
    },
    {
      method: "Beta",
      datasets: ["d1"],
      points: [
        { ratio: 0.005, n_features: 1, mean: 0.5, std: 0.1 },
        { ratio: 0.05, n_features: 10, mean: 0.55, std: 0.08 },
        { ratio: 0.1, n_features: 20, mean: 0.6, std: 0.06 },
      ],
    },
  ],
};

export const fsdemFixture: FsdemResponse = {
  experiment: "10Percent",
  rows: [
    { dataset: "d1", method: "Alpha", metric: "ACC", fsdem: 1.0125, stability: 0.97 },
    { dataset: "d1", method: "Beta", metric: "ACC", fsdem: 0.61, stability: null },
    { dataset: "d1", method: "Alpha", metric: "AUC", fsdem: 1.1, stability: 0.99 },
  ],
};

export const timingsFixture: TimingRow[] = [
  { method: "Alpha", axis: "features", n_instances: 500, n_features: 100, seconds: 0.001, timed_out: false },
  { method: "Alpha", axis: "features", n_instances: 500, n_features: 1000, seconds: 0.01, timed_out: false },
  { method: "Alpha", axis: "features", n_instances: 500, n_features: 10000, seconds: 0.12, timed_out: true },
];
