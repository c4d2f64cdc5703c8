/**
 * Small deterministic SVG chart renderer: line series over a numeric x
 * axis, linear or log10 y axis, legend, and an optional annotated point.
 * Output depends only on the inputs (no timestamps, no randomness).
 */

export interface Series {
  label: string;
  color: string;
  points: Array<[number, number]>;
}

export interface Annotation {
  x: number;
  y: number;
  text: string;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
  logY?: boolean;
  annotation?: Annotation;
}

const MARGIN = { top: 42, right: 24, bottom: 48, left: 64 };

function fmt(v: number): string {
  // fixed layout-coordinate formatting keeps output byte-stable
  return v.toFixed(2);
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.001 && a < 10000) {
    return Number(v.toPrecision(6)).toString();
  }
  return v.toExponential(0).replace("+", "");
}

/** Tick positions at 1/2/5 steps covering [lo, hi]. */
export function linearTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = Math.pow(10, Math.floor(Math.log10(span / target)));
  let step = step0;
  for (const m of [1, 2, 5, 10]) {
    step = m * step0;
    if (span / step <= target) break;
  }
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return ticks;
}

/** Decade ticks 10^k covering [lo, hi], both positive. */
export function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let k = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, k) <= hi * (1 + 1e-9); k++) {
    ticks.push(Math.pow(10, k));
  }
  return ticks.length > 0 ? ticks : [lo];
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function renderChart(series: Series[], options: ChartOptions): string {
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
  if (xLo === xHi) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (logY) {
    if (yLo === yHi) {
      yLo /= 10;
      yHi *= 10;
    }
  } else {
    const pad = (yHi - yLo || Math.abs(yHi) || 1) * 0.05;
    yLo = Math.min(0, yLo);
    yHi += pad;
  }

  const sx = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const syLin = (y: number) => MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;
  const syLog = (y: number) =>
    MARGIN.top + plotH -
    ((Math.log10(y) - Math.log10(yLo)) / (Math.log10(yHi) - Math.log10(yLo))) * plotH;
  const sy = logY ? syLog : syLin;

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  out.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  out.push(
    `<text x="${fmt(width / 2)}" y="24" text-anchor="middle" font-size="15">` +
    `${esc(options.title)}</text>`,
  );

  const xTicks = linearTicks(xLo, xHi);
  const yTicks = logY ? logTicks(yLo, yHi) : linearTicks(yLo, yHi);
  for (const t of xTicks) {
    const x = fmt(sx(t));
    out.push(
      `<line x1="${x}" y1="${fmt(MARGIN.top)}" x2="${x}" ` +
      `y2="${fmt(MARGIN.top + plotH)}" stroke="#dddddd" stroke-width="1"/>`,
    );
    out.push(
      `<text x="${x}" y="${fmt(MARGIN.top + plotH + 18)}" text-anchor="middle" ` +
      `font-size="11">${esc(fmtTick(t))}</text>`,
    );
  }
  for (const t of yTicks) {
    const y = fmt(sy(t));
    out.push(
      `<line x1="${fmt(MARGIN.left)}" y1="${y}" x2="${fmt(MARGIN.left + plotW)}" ` +
      `y2="${y}" stroke="#dddddd" stroke-width="1"/>`,
    );
    out.push(
      `<text x="${fmt(MARGIN.left - 7)}" y="${y}" text-anchor="end" ` +
      `dominant-baseline="middle" font-size="11">${esc(fmtTick(t))}</text>`,
    );
  }
  out.push(
    `<rect x="${fmt(MARGIN.left)}" y="${fmt(MARGIN.top)}" width="${fmt(plotW)}" ` +
    `height="${fmt(plotH)}" fill="none" stroke="black" stroke-width="1"/>`,
  );
  out.push(
    `<text x="${fmt(MARGIN.left + plotW / 2)}" y="${fmt(height - 10)}" ` +
    `text-anchor="middle" font-size="13">${esc(options.xLabel)}</text>`,
  );
  out.push(
    `<text x="18" y="${fmt(MARGIN.top + plotH / 2)}" text-anchor="middle" ` +
    `font-size="13" transform="rotate(-90 18 ${fmt(MARGIN.top + plotH / 2)})">` +
    `${esc(options.yLabel)}</text>`,
  );

  for (const s of drawable) {
    if (s.points.length === 0) continue;
    if (s.points.length === 1) {
      const [x, y] = s.points[0];
      out.push(
        `<circle cx="${fmt(sx(x))}" cy="${fmt(sy(y))}" r="4" fill="${s.color}">` +
        `<title>${esc(s.label)}</title></circle>`,
      );
    } else {
      const path = s.points
        .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(sx(x))} ${fmt(sy(y))}`)
        .join(" ");
      out.push(
        `<path d="${path}" fill="none" stroke="${s.color}" stroke-width="1.8">` +
        `<title>${esc(s.label)}</title></path>`,
      );
    }
  }

  // legend, top-right inside the frame
  const legendX = MARGIN.left + plotW - 150;
  let legendY = MARGIN.top + 14;
  for (const s of series) {
    out.push(
      `<line x1="${fmt(legendX)}" y1="${fmt(legendY - 4)}" x2="${fmt(legendX + 26)}" ` +
      `y2="${fmt(legendY - 4)}" stroke="${s.color}" stroke-width="2.5"/>`,
    );
    out.push(
      `<text x="${fmt(legendX + 32)}" y="${fmt(legendY)}" font-size="12">` +
      `${esc(s.label)}</text>`,
    );
    legendY += 17;
  }

  if (options.annotation) {
    const { x, y, text } = options.annotation;
    const px = sx(x);
    const py = sy(Math.max(y, logY ? yLo : -Infinity));
    out.push(
      `<circle cx="${fmt(px)}" cy="${fmt(py)}" r="4.5" fill="none" ` +
      `stroke="black" stroke-width="1.5"/>`,
    );
    const anchor = px > MARGIN.left + plotW * 0.6 ? "end" : "start";
    const tx = anchor === "end" ? px - 8 : px + 8;
    out.push(
      `<text x="${fmt(tx)}" y="${fmt(py - 9)}" text-anchor="${anchor}" ` +
      `font-size="12" class="annotation">${esc(text)}</text>`,
    );
  }

  out.push("</svg>");
  return out.join("\n") + "\n";
}
