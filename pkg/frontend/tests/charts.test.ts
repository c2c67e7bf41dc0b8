import { describe, expect, it } from "vitest";

import { cdDiagram, lineChart, timingsChart } from "../src/charts";
import { curvesFixture, ranksFixture, timingsFixture } from "./fixtures";

function parseAttr(tag: string, attr: string): number {
  const match = tag.match(new RegExp(`${attr}="([-\\d.]+)"`));
  if (!match) throw new Error(`no ${attr} in ${tag}`);
  return Number(match[1]);
}

describe("lineChart", () => {
  it("draws one line, one band, and markers per method", () => {
    const svg = lineChart(curvesFixture);
    expect(svg.match(/<polyline class="curve"/g)).toHaveLength(2);
    expect(svg.match(/<polygon class="band"/g)).toHaveLength(2);
    expect(svg).toContain('data-method="Alpha"');
    expect(svg).toContain('data-method="Beta"');
  });

  it("hover titles carry the exact values from the response", () => {
    const svg = lineChart(curvesFixture);
    expect(svg).toContain("Alpha @ ratio 0.05 (k=10): mean 0.8, std 0.02");
    expect(svg).toContain("Beta @ ratio 0.005 (k=1): mean 0.5, std 0.1");
  });

  it("band height at a point spans mean +/- std in pixel space", () => {
    const svg = lineChart(curvesFixture);
    const band = svg.match(/<polygon class="band" data-method="Alpha" points="([^"]+)"/)![1];
    const coords = band.split(" ").map((pair) => pair.split(",").map(Number));
    const n = curvesFixture.curves[0].points.length;
    const upperFirst = coords[0];
    const lowerLast = coords[2 * n - 1]; // reversed lower edge ends at the first ratio
    expect(upperFirst[0]).toBeCloseTo(lowerLast[0], 5);
    const pixelHeight = lowerLast[1] - upperFirst[1];
    // compare against an independently scaled 2*std for the same y-domain
    const all = curvesFixture.curves.flatMap((c) => c.points);
    let lo = Math.min(...all.map((p) => p.mean - p.std));
    let hi = Math.max(...all.map((p) => p.mean + p.std));
    const pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    const plotH = 360 - 16 - 48;
    const expected = (2 * curvesFixture.curves[0].points[0].std * plotH) / (hi - lo);
    expect(pixelHeight).toBeCloseTo(expected, 0);
  });

  it("labels a lower-is-better axis", () => {
    const svg = lineChart({ ...curvesFixture, metric: "AAD", orientation: "lower" });
    expect(svg).toContain("AAD (lower is better)");
  });
});

describe("cdDiagram", () => {
  it("CD ruler length equals cd_value in axis units", () => {
    const width = 640;
    const svg = cdDiagram(ranksFixture, width);
    const ruler = svg.match(/<line class="cd-ruler"[^/]+\/>/)![0];
    const span = width - 2 * 150;
    const px = parseAttr(ruler, "x2") - parseAttr(ruler, "x1");
    const k = ranksFixture.methods.length;
    expect(px).toBeCloseTo((ranksFixture.cd_value / (k - 1)) * span, 0);
  });

  it("labels every method with its average rank", () => {
    const svg = cdDiagram(ranksFixture);
    expect(svg).toContain("Alpha (1.250)");
    expect(svg).toContain("Beta (1.850)");
    expect(svg).toContain("Gamma (2.900)");
  });

  it("draws one bar per clique spanning its rank range", () => {
    const svg = cdDiagram(ranksFixture, 640);
    const bars = svg.match(/<line class="clique"[^/]+\/>/g)!;
    expect(bars).toHaveLength(1);
    const span = 640 - 2 * 150;
    const xOf = (rank: number) => 150 + ((rank - 1) / 2) * span;
    expect(parseAttr(bars[0], "x1")).toBeCloseTo(xOf(1.25) - 3, 0);
    expect(parseAttr(bars[0], "x2")).toBeCloseTo(xOf(1.85) + 3, 0);
  });
});

describe("timingsChart", () => {
  it("uses log-log decade ticks and marks timeouts", () => {
    const svg = timingsChart(timingsFixture, "features");
    expect(svg).toContain("1e2"); // x decade tick at 100
    expect(svg).toContain("1e4"); // x decade tick at 10000
    expect(svg).toContain("seconds (log)");
    expect(svg).toContain("[timed out]");
  });
});
