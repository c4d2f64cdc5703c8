/**
 * Optional raster output: the chart's frame, gridlines, curves, legend
 * swatches, and annotation marker drawn into an RGBA buffer and encoded
 * as a PNG (zlib from node, CRC hand-rolled). Text labels are an SVG
 * feature; raster is a preview format.
 */

import { deflateSync } from "node:zlib";
import type { ChartOptions, Series } from "./svg.js";
import { linearTicks, logTicks } from "./svg.js";

const MARGIN = { top: 42, right: 24, bottom: 48, left: 64 };

class Raster {
  readonly data: Uint8Array;

  constructor(readonly width: number, readonly height: number) {
    this.data = new Uint8Array(width * height * 4).fill(255);
  }

  set(x: number, y: number, rgb: [number, number, number]): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
    const o = (yi * this.width + xi) * 4;
    this.data[o] = rgb[0];
    this.data[o + 1] = rgb[1];
    this.data[o + 2] = rgb[2];
    this.data[o + 3] = 255;
  }

  line(x0: number, y0: number, x1: number, y1: number,
       rgb: [number, number, number]): void {
    // Bresenham on rounded endpoints
    let xa = Math.round(x0), ya = Math.round(y0);
    const xb = Math.round(x1), yb = Math.round(y1);
    const dx = Math.abs(xb - xa), dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1, sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(xa, ya, rgb);
      if (xa === xb && ya === yb) break;
      const e2 = 2 * err;
      if (e2 >= dy) { err += dy; xa += sx; }
      if (e2 <= dx) { err += dx; ya += sy; }
    }
  }

  circle(cx: number, cy: number, r: number, rgb: [number, number, number]): void {
    for (let a = 0; a < 64; a++) {
      const t = (a / 64) * 2 * Math.PI;
      this.set(cx + r * Math.cos(t), cy + r * Math.sin(t), rgb);
    }
  }
}

function parseColor(color: string): [number, number, number] {
  const m = /^#([0-9a-f]{6})$/i.exec(color);
  if (!m) return [0, 0, 0];
  const v = parseInt(m[1], 16);
  return [(v >> 16) & 255, (v >> 8) & 255, v & 255];
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(data: Uint8Array): number {
  let c = 0xffffffff;
  for (const byte of data) {
    c = CRC_TABLE[(c ^ byte) & 255] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, body: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(body.length, 0);
  head.write(type, 4, "ascii");
  const crcInput = Buffer.concat([head.subarray(4), body]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(crcInput), 0);
  return Buffer.concat([head, body, tail]);
}

export function encodePng(raster: Raster): Buffer {
  const { width, height, data } = raster;
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 6;   // RGBA
  // filter 0 on every scanline
  const rawLines = Buffer.alloc(height * (1 + width * 4));
  for (let y = 0; y < height; y++) {
    const o = y * (1 + width * 4);
    rawLines[o] = 0;
    rawLines.set(data.subarray(y * width * 4, (y + 1) * width * 4), o + 1);
  }
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(rawLines, { level: 9 })),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

export function renderChartPng(series: Series[], options: ChartOptions): Buffer {
  const width = options.width ?? 760;
  const height = options.height ?? 480;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const logY = options.logY ?? false;

  const drawable = series.map((s) => ({
    ...s,
    points: logY ? s.points.filter(([, y]) => y > 0) : s.points,
  }));
  const allPoints = drawable.flatMap((s) => s.points);
  if (allPoints.length === 0) {
    throw new Error("nothing to draw: every point was filtered out");
  }
  const xs = allPoints.map(([x]) => x);
  const ys = allPoints.map(([, y]) => y);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  if (xLo === xHi) { xLo -= 0.5; xHi += 0.5; }
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (logY) {
    if (yLo === yHi) { yLo /= 10; yHi *= 10; }
  } else {
    const pad = (yHi - yLo || Math.abs(yHi) || 1) * 0.05;
    yLo = Math.min(0, yLo);
    yHi += pad;
  }
  const sx = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const sy = (y: number) =>
    logY
      ? MARGIN.top + plotH -
        ((Math.log10(y) - Math.log10(yLo)) /
          (Math.log10(yHi) - Math.log10(yLo))) * plotH
      : MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;

  const img = new Raster(width, height);
  const grey: [number, number, number] = [221, 221, 221];
  const black: [number, number, number] = [0, 0, 0];

  for (const t of (logY ? logTicks(yLo, yHi) : linearTicks(yLo, yHi))) {
    img.line(MARGIN.left, sy(t), MARGIN.left + plotW, sy(t), grey);
  }
  for (const t of linearTicks(xLo, xHi)) {
    img.line(sx(t), MARGIN.top, sx(t), MARGIN.top + plotH, grey);
  }
  img.line(MARGIN.left, MARGIN.top, MARGIN.left + plotW, MARGIN.top, black);
  img.line(MARGIN.left, MARGIN.top + plotH, MARGIN.left + plotW,
           MARGIN.top + plotH, black);
  img.line(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + plotH, black);
  img.line(MARGIN.left + plotW, MARGIN.top, MARGIN.left + plotW,
           MARGIN.top + plotH, black);

  let legendY = MARGIN.top + 10;
  for (const s of drawable) {
    const rgb = parseColor(s.color);
    if (s.points.length === 1) {
      const [x, y] = s.points[0];
      img.circle(sx(x), sy(y), 4, rgb);
    } else {
      for (let i = 1; i < s.points.length; i++) {
        const [x0, y0] = s.points[i - 1];
        const [x1, y1] = s.points[i];
        img.line(sx(x0), sy(y0), sx(x1), sy(y1), rgb);
      }
    }
    const lx = MARGIN.left + plotW - 150;
    img.line(lx, legendY, lx + 26, legendY, rgb);
    legendY += 17;
  }

  if (options.annotation) {
    img.circle(sx(options.annotation.x), sy(options.annotation.y), 5, black);
  }
  return encodePng(img);
}

export type { Raster };
