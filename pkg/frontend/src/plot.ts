/**
 * Figure assembly: the two standard views of a sweep CSV.
 *
 * No model quantity is recomputed here; every plotted value (including
 * the annotated secrecy maximum) comes straight from the CSV rows.
 */

import { maxSecrecyRow, type SweepFrame, type SweepRow } from "./csv.js";
import { renderChart, type Annotation, type ChartOptions, type Series } from "./svg.js";
import { renderChartPng } from "./png.js";

export type FigureKind = "probabilities" | "capacities";

export interface FigureSpec {
  series: Series[];
  options: ChartOptions;
  /** set for the capacities figure: the argmax row the annotation shows */
  annotationRow?: SweepRow;
}

function column(frame: SweepFrame, col: keyof SweepRow): Array<[number, number]> {
  return frame.rows.map((r) => [r.eta, r[col]] as [number, number]);
}

export function probabilitiesFigure(frame: SweepFrame, logY = false): FigureSpec {
  const series: Series[] = [
    { label: "p_c (correct key)", color: "#1f77b4", points: column(frame, "p_c") },
    { label: "p_e (frame erasure)", color: "#ff7f0e", points: column(frame, "p_e") },
    { label: "p_w (wrong key)", color: "#2ca02c", points: column(frame, "p_w") },
  ];
  return {
    series,
    options: {
      title: "Attack outcome probabilities vs noise rate",
      xLabel: "noise rate eta",
      yLabel: logY ? "probability (log scale)" : "probability",
      logY,
    },
  };
}

export function capacitiesFigure(frame: SweepFrame): FigureSpec {
  const series: Series[] = [
    { label: "c_b (main channel)", color: "#1f77b4", points: column(frame, "c_b") },
    { label: "c_e (eavesdropper)", color: "#d62728", points: column(frame, "c_e") },
    { label: "c_s (secrecy)", color: "#2ca02c", points: column(frame, "c_s") },
  ];
  const { row } = maxSecrecyRow(frame);
  const annotation: Annotation = {
    x: row.eta,
    y: row.c_s,
    text: `max c_s = ${row.c_s.toPrecision(4)} at eta = ${row.eta.toPrecision(3)}`,
  };
  return {
    series,
    options: {
      title: "Channel and secrecy capacities vs noise rate",
      xLabel: "noise rate eta",
      yLabel: "bits per channel use",
      annotation,
    },
    annotationRow: row,
  };
}

export interface RenderSettings {
  logY?: boolean;
  raster?: boolean;
  width?: number;
  height?: number;
}

export function buildFigure(kind: FigureKind, frame: SweepFrame,
                            settings: RenderSettings = {}): FigureSpec {
  const spec = kind === "probabilities"
    ? probabilitiesFigure(frame, settings.logY ?? false)
    : capacitiesFigure(frame);
  if (kind === "capacities" && settings.logY) {
    spec.options.logY = true;
    spec.options.yLabel += " (log scale)";
  }
  if (settings.width) spec.options.width = settings.width;
  if (settings.height) spec.options.height = settings.height;
  return spec;
}

export function renderFigure(kind: FigureKind, frame: SweepFrame,
                             settings: RenderSettings = {}): string | Buffer {
  const spec = buildFigure(kind, frame, settings);
  return settings.raster
    ? renderChartPng(spec.series, spec.options)
    : renderChart(spec.series, spec.options);
}
