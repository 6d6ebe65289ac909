/**
 * Deterministic SVG rendering: fixed canvas, fixed palette, no timestamps
 * or random ids, so identical inputs produce identical bytes.
 */

import { PanelSpec } from "./figure.js";

const WIDTH = 1040;
const HEIGHT = 800;
const MARGIN = { top: 70, right: 24, bottom: 52, left: 78 };
const GUTTER_X = 56;
const GUTTER_Y = 64;

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function fmt(value: number): string {
  if (!Number.isFinite(value)) {
    throw new Error(`non-finite coordinate ${value}`);
  }
  return value.toFixed(2);
}

function tickLabel(value: number, log: boolean): string {
  if (log) {
    const exponent = Math.round(Math.log10(value));
    return `1e${exponent}`;
  }
  if (value === 0) return "0";
  if (Math.abs(value) >= 0.01 && Math.abs(value) < 10000) {
    return Number(value.toPrecision(3)).toString();
  }
  return value.toExponential(1);
}

interface Scale {
  toPixel(value: number): number;
  ticks: number[];
}

function makeScale(values: number[], log: boolean, pixelLo: number, pixelHi: number): Scale {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (log) {
    lo = Math.pow(10, Math.floor(Math.log10(lo)));
    hi = Math.pow(10, Math.ceil(Math.log10(hi)));
    if (lo === hi) hi = lo * 10;
    const transform = (v: number) => Math.log10(v);
    const span = transform(hi) - transform(lo);
    const ticks: number[] = [];
    const step = Math.max(1, Math.round(span / 6));
    for (let e = Math.log10(lo); e <= Math.log10(hi) + 1e-9; e += step) {
      ticks.push(Math.pow(10, Math.round(e)));
    }
    return {
      toPixel: (v) => pixelLo + ((transform(v) - transform(lo)) / span) * (pixelHi - pixelLo),
      ticks,
    };
  }
  if (lo === hi) {
    hi = lo + 1;
  }
  const span = hi - lo;
  const ticks = [lo, lo + span / 3, lo + (2 * span) / 3, hi];
  return {
    toPixel: (v) => pixelLo + ((v - lo) / span) * (pixelHi - pixelLo),
    ticks,
  };
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderSvg(panels: PanelSpec[], title?: string): string {
  if (panels.length !== 4) {
    throw new Error(`expected 4 panels, got ${panels.length}`);
  }
  const panelWidth = (WIDTH - MARGIN.left - MARGIN.right - GUTTER_X) / 2;
  const panelHeight = (HEIGHT - MARGIN.top - MARGIN.bottom - GUTTER_Y) / 2;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  if (title) {
    parts.push(
      `<text x="${WIDTH / 2}" y="26" text-anchor="middle" font-size="17" fill="#111111">${escapeXml(title)}</text>`
    );
  }

  const labels = panels[0].curves.map((c) => c.label);
  labels.forEach((label, i) => {
    const x = MARGIN.left + i * 220;
    const y = 48;
    parts.push(
      `<line x1="${x}" y1="${y - 4}" x2="${x + 26}" y2="${y - 4}" stroke="${PALETTE[i % PALETTE.length]}" stroke-width="2.5"/>`
    );
    parts.push(`<text x="${x + 32}" y="${y}" font-size="13" fill="#111111">${escapeXml(label)}</text>`);
  });

  panels.forEach((panel, index) => {
    const col = index % 2;
    const row = Math.floor(index / 2);
    const x0 = MARGIN.left + col * (panelWidth + GUTTER_X);
    const y0 = MARGIN.top + row * (panelHeight + GUTTER_Y);

    const xs = panel.curves.flatMap((c) => c.points.map((p) => p[0]));
    const ys = panel.curves.flatMap((c) => c.points.map((p) => p[1]));
    if (xs.length === 0) {
      throw new Error(`panel ${panel.title} has no points`);
    }
    const xScale = makeScale(xs, panel.xLog, x0, x0 + panelWidth);
    const yScale = makeScale(ys, panel.yLog, y0 + panelHeight, y0);

    parts.push(
      `<rect x="${fmt(x0)}" y="${fmt(y0)}" width="${fmt(panelWidth)}" height="${fmt(panelHeight)}" fill="none" stroke="#333333"/>`
    );
    parts.push(
      `<text x="${fmt(x0 + panelWidth / 2)}" y="${fmt(y0 - 8)}" text-anchor="middle" font-size="14" fill="#111111">${escapeXml(panel.title)}</text>`
    );
    for (const tick of xScale.ticks) {
      const px = xScale.toPixel(tick);
      parts.push(
        `<line x1="${fmt(px)}" y1="${fmt(y0 + panelHeight)}" x2="${fmt(px)}" y2="${fmt(y0 + panelHeight + 5)}" stroke="#333333"/>`
      );
      parts.push(
        `<text x="${fmt(px)}" y="${fmt(y0 + panelHeight + 18)}" text-anchor="middle" font-size="11" fill="#333333">${tickLabel(tick, panel.xLog)}</text>`
      );
    }
    for (const tick of yScale.ticks) {
      const py = yScale.toPixel(tick);
      parts.push(`<line x1="${fmt(x0 - 5)}" y1="${fmt(py)}" x2="${fmt(x0)}" y2="${fmt(py)}" stroke="#333333"/>`);
      parts.push(
        `<text x="${fmt(x0 - 8)}" y="${fmt(py + 4)}" text-anchor="end" font-size="11" fill="#333333">${tickLabel(tick, panel.yLog)}</text>`
      );
    }
    parts.push(
      `<text x="${fmt(x0 + panelWidth / 2)}" y="${fmt(y0 + panelHeight + 36)}" text-anchor="middle" font-size="12" fill="#111111">${escapeXml(panel.xLabel)}</text>`
    );
    parts.push(
      `<text x="${fmt(x0 - 56)}" y="${fmt(y0 + panelHeight / 2)}" text-anchor="middle" font-size="12" fill="#111111" transform="rotate(-90 ${fmt(x0 - 56)} ${fmt(y0 + panelHeight / 2)})">${escapeXml(panel.yLabel)}</text>`
    );

    panel.curves.forEach((curve, curveIndex) => {
      const coords = curve.points
        .map(([x, y]) => `${fmt(xScale.toPixel(x))},${fmt(yScale.toPixel(y))}`)
        .join(" ");
      parts.push(
        `<polyline class="curve" fill="none" stroke="${PALETTE[curveIndex % PALETTE.length]}" stroke-width="1.8" points="${coords}"/>`
      );
    });
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
