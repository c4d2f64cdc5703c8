import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { parseSweepCsv } from "../src/csv.js";
import { renderFigure } from "../src/plot.js";

const FIXTURE = readFileSync(new URL("./fixtures/sweep_small.csv", import.meta.url), "utf8");
const frame = parseSweepCsv(FIXTURE);

describe("raster output", () => {
  it("emits a structurally valid PNG", () => {
    const png = renderFigure("capacities", frame, { raster: true }) as Buffer;
    expect(png.subarray(0, 8)).toEqual(
      Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    );
    expect(png.toString("latin1", 12, 16)).toBe("IHDR");
    expect(png.readUInt32BE(16)).toBe(760);  // width
    expect(png.readUInt32BE(20)).toBe(480);  // height
    expect(png.toString("latin1", png.length - 8, png.length - 4)).toBe("IEND");
  });

  it("is deterministic", () => {
    const a = renderFigure("probabilities", frame, { raster: true }) as Buffer;
    const b = renderFigure("probabilities", frame, { raster: true }) as Buffer;
    expect(a.equals(b)).toBe(true);
  });

  it("draws something (not a blank canvas)", () => {
    const blankRows = "eta,n_c,tau,a,p_s,p_m,p_f,p_c,p_e,p_w,c_b,c_e,c_s\n";
    expect(() => parseSweepCsv(blankRows)).toThrow();
    const png = renderFigure("capacities", frame, { raster: true }) as Buffer;
    const idatLength = png.readUInt32BE(33);
    expect(idatLength).toBeGreaterThan(1000);  // a blank deflate is tiny
  });
});
