import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { maxSecrecyRow, parseSweepCsv, REQUIRED_COLUMNS } from "../src/csv.js";

const FIXTURE = readFileSync(new URL("./fixtures/sweep_small.csv", import.meta.url), "utf8");

describe("parseSweepCsv", () => {
  it("parses the fixture produced by the core package", () => {
    const frame = parseSweepCsv(FIXTURE);
    expect(frame.rows).toHaveLength(25);
    const first = frame.rows[0];
    expect(first.eta).toBeCloseTo(0.001, 12);
    expect(first.n_c).toBe(5);
    expect(first.tau).toBe(3);
    expect(first.a).toBe(23);
    for (const row of frame.rows) {
      expect(row.p_c + row.p_e + row.p_w).toBeCloseTo(1.0, 10);
      expect(row.c_s).toBeCloseTo(row.c_b - row.c_e, 10);
    }
  });

  it("keeps every required column", () => {
    const frame = parseSweepCsv(FIXTURE);
    for (const col of REQUIRED_COLUMNS) {
      expect(Number.isFinite(frame.rows[3][col])).toBe(true);
    }
  });

  it("rejects a header with missing columns, naming them", () => {
    const bad = "eta,n_c,tau\n0.001,5,3\n";
    expect(() => parseSweepCsv(bad)).toThrowError(/missing required column.*p_s/);
  });

  it("rejects shuffled rows (eta must increase strictly)", () => {
    const lines = FIXTURE.trim().split("\n");
    const shuffled = [lines[0], lines[5], lines[2], lines[9]].join("\n");
    expect(() => parseSweepCsv(shuffled)).toThrowError(/strictly increasing/);
  });

  it("rejects empty input and non-numeric fields", () => {
    expect(() => parseSweepCsv("")).toThrowError(/empty CSV/);
    expect(() => parseSweepCsv(FIXTURE.split("\n")[0] + "\n")).toThrowError(/no data rows/);
    const lines = FIXTURE.trim().split("\n");
    const corrupted = [lines[0], lines[1].replace(/^0\.001/, "oops")].join("\n");
    expect(() => parseSweepCsv(corrupted)).toThrowError(/not a number/);
  });

  it("accepts a single-row CSV", () => {
    const lines = FIXTURE.trim().split("\n");
    const single = parseSweepCsv([lines[0], lines[1]].join("\n"));
    expect(single.rows).toHaveLength(1);
  });
});

describe("maxSecrecyRow", () => {
  it("finds the argmax of c_s", () => {
    const frame = parseSweepCsv(FIXTURE);
    const { index, row } = maxSecrecyRow(frame);
    for (const other of frame.rows) {
      expect(row.c_s).toBeGreaterThanOrEqual(other.c_s);
    }
    expect(frame.rows[index]).toBe(row);
    // this fixture's 0.001-step grid peaks at the point nearest 0.0125
    expect(row.eta).toBeCloseTo(0.013, 9);
  });
});
