#!/usr/bin/env node
/** Plot command: render a sweep CSV into one of the two figures. */

import { parseArgs } from "node:util";
import { readFileSync, writeFileSync } from "node:fs";
import { parseSweepCsv } from "./csv.js";
import { renderFigure, type FigureKind } from "./plot.js";

const USAGE = `usage: noisycfb-plot --csv sweep.csv --out figure.svg \\
                     --which {probabilities|capacities} [--log-y] [--raster]
                     [--width N] [--height N]

Renders the sweep CSV emitted by the core package. Output is SVG by
default; --raster writes a PNG preview (curves without text labels).`;

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        csv: { type: "string" },
        out: { type: "string" },
        which: { type: "string" },
        "log-y": { type: "boolean", default: false },
        raster: { type: "boolean", default: false },
        width: { type: "string" },
        height: { type: "string" },
        help: { type: "boolean", default: false },
      },
    });
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  const values = parsed.values;
  if (values.help) {
    console.log(USAGE);
    return 0;
  }
  const which = values.which as FigureKind | undefined;
  if (!values.csv || !values.out || !which) {
    console.error("error: --csv, --out and --which are required");
    console.error(USAGE);
    return 2;
  }
  if (which !== "probabilities" && which !== "capacities") {
    console.error(`error: --which must be 'probabilities' or 'capacities', got '${which}'`);
    return 2;
  }

  let frame;
  try {
    frame = parseSweepCsv(readFileSync(values.csv, "utf8"));
  } catch (err) {
    console.error(`error reading ${values.csv}: ${(err as Error).message}`);
    return 2;
  }

  try {
    const rendered = renderFigure(which, frame, {
      logY: values["log-y"],
      raster: values.raster,
      width: values.width ? Number(values.width) : undefined,
      height: values.height ? Number(values.height) : undefined,
    });
    writeFileSync(values.out, rendered);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  console.error(`wrote ${values.out} (${which}, ${frame.rows.length} rows)`);
  return 0;
}

import { fileURLToPath } from "node:url";
if (process.argv[1] && fileURLToPath(import.meta.url) === process.argv[1]) {
  process.exit(main(process.argv.slice(2)));
}
