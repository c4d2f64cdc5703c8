import { execFileSync } from "node:child_process";
import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { maxSecrecyRow, parseSweepCsv } from "../src/csv.js";
import { buildFigure, capacitiesFigure, probabilitiesFigure, renderFigure } from "../src/plot.js";
import { renderChart } from "../src/svg.js";

const FIXTURE = readFileSync(new URL("./fixtures/sweep_small.csv", import.meta.url), "utf8");
const frame = parseSweepCsv(FIXTURE);

function whichNoisycfb(): string | null {
  try {
    return execFileSync("which", ["noisycfb"], { encoding: "utf8" }).trim() || null;
  } catch {
    return null;
  }
}

describe("probabilities figure", () => {
  it("renders three labeled curves", () => {
    const svg = renderFigure("probabilities", frame) as string;
    expect(svg).toContain("<svg");
    expect(svg).toContain("p_c (correct key)");
    expect(svg).toContain("p_e (frame erasure)");
    expect(svg).toContain("p_w (wrong key)");
    expect((svg.match(/<path d="M/g) ?? []).length).toBe(3);
  });

  it("is a pure function of the CSV", () => {
    const a = renderFigure("probabilities", frame) as string;
    const b = renderFigure("probabilities", parseSweepCsv(FIXTURE)) as string;
    expect(a).toBe(b);
  });

  it("supports a log-scale y axis by dropping nonpositive points", () => {
    const spec = probabilitiesFigure(frame, true);
    expect(spec.options.logY).toBe(true);
    const svg = renderFigure("probabilities", frame, { logY: true }) as string;
    expect(svg).toContain("log scale");
  });

  it("renders a single-row CSV as markers without crashing", () => {
    const lines = FIXTURE.trim().split("\n");
    const single = parseSweepCsv([lines[0], lines[12]].join("\n"));
    const svg = renderFigure("probabilities", single) as string;
    expect((svg.match(/<circle/g) ?? []).length).toBeGreaterThanOrEqual(3);
    expect(svg).not.toContain("<path d=");
  });
});

describe("capacities figure", () => {
  it("annotates exactly the argmax row of the CSV", () => {
    const spec = capacitiesFigure(frame);
    const { row } = maxSecrecyRow(frame);
    expect(spec.annotationRow).toBe(row);
    expect(spec.options.annotation!.x).toBe(row.eta);
    expect(spec.options.annotation!.y).toBe(row.c_s);
    const svg = renderChart(spec.series, spec.options);
    expect(svg).toContain(
      `max c_s = ${row.c_s.toPrecision(4)} at eta = ${row.eta.toPrecision(3)}`,
    );
  });

  it("renders the three capacity curves", () => {
    const svg = renderFigure("capacities", frame) as string;
    expect(svg).toContain("c_b (main channel)");
    expect(svg).toContain("c_e (eavesdropper)");
    expect(svg).toContain("c_s (secrecy)");
  });

  it("honors width/height settings", () => {
    const svg = renderFigure("capacities", frame, { width: 400, height: 300 }) as string;
    expect(svg).toContain('width="400" height="300"');
  });
});

describe("figure shapes against a freshly generated default sweep", () => {
  // integration with the core CLI when it is installed alongside
  const bin = whichNoisycfb();
  it.skipIf(!bin)("correct curve shapes and annotation on the 500-point grid", () => {
    const csv = execFileSync(bin!, ["sweep"], {
      encoding: "utf8", maxBuffer: 64 * 1024 * 1024,
    });
    const full = parseSweepCsv(csv);
    expect(full.rows).toHaveLength(500);

    // p_c falls monotonically-ish to ~0; p_w climbs; c_b decreases
    const pc = full.rows.map((r) => r.p_c);
    expect(pc[0]).toBeGreaterThan(0.99);
    expect(pc[pc.length - 1]).toBeLessThan(1e-6);
    const cb = full.rows.map((r) => r.c_b);
    for (let i = 1; i < cb.length; i++) {
      expect(cb[i]).toBeLessThan(cb[i - 1]);
    }

    const spec = buildFigure("capacities", full);
    const row = spec.annotationRow!;
    expect(row.eta).toBeCloseTo(0.0125, 6);
    expect(row.c_s).toBeCloseTo(0.3442, 2);
    const svg = renderFigure("capacities", full) as string;
    expect(svg).toContain(`max c_s = ${row.c_s.toPrecision(4)}`);
  });
});
