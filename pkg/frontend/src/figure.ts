/**
 * Figure assembly: four panels per comparison, one curve per algorithm.
 *
 * Panels follow the benchmark layout: gap against iteration count on
 * log-log axes, gap against wall-clock time on a log y axis, and the same
 * pair for the certificate (Wolfe) gap. Traces of monotone algorithms are
 * re-checked for non-increasing objective values before anything renders;
 * traces without a primal gap column fall back to the Wolfe gap with an
 * annotated legend label.
 */

import { groupByAlgorithm, parseTraceCsv, TraceRow } from "./csv.js";

/** Gap values are clipped here before the log transform. */
export const GAP_FLOOR = 1e-16;

/** Algorithms whose objective column must be non-increasing. */
export const MONOTONE_ALGORITHMS = new Set(["afw", "pfw", "lacg-afw", "lacg-pfw"]);

const MONOTONE_SLACK = 1e-12;

export interface CurveSpec {
  label: string;
  points: Array<[number, number]>;
}

export interface PanelSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xLog: boolean;
  yLog: boolean;
  curves: CurveSpec[];
}

export interface FigureInput {
  path: string;
  label?: string;
  text: string;
}

function assertMonotone(label: string, rows: TraceRow[]): void {
  for (let i = 1; i < rows.length; i++) {
    if (rows[i].f > rows[i - 1].f + MONOTONE_SLACK) {
      throw new Error(
        `trace ${label} is not monotone at iter ${rows[i].iter}: ` +
          `${rows[i - 1].f} -> ${rows[i].f}`
      );
    }
  }
}

function clip(value: number): number {
  return Math.max(value, GAP_FLOOR);
}

interface Series {
  label: string;
  rows: TraceRow[];
  usesWolfeFallback: boolean;
}

function collectSeries(inputs: FigureInput[]): Series[] {
  const series: Series[] = [];
  for (const input of inputs) {
    const rows = parseTraceCsv(input.text, input.label ?? input.path);
    for (const [algorithm, algorithmRows] of groupByAlgorithm(rows)) {
      const label = input.label && rows.length === algorithmRows.length ? input.label : algorithm;
      if (MONOTONE_ALGORITHMS.has(algorithm)) {
        assertMonotone(label, algorithmRows);
      }
      const hasPrimal = algorithmRows.every((row) => row.primalGap !== null);
      series.push({
        label: hasPrimal ? label : `${label} (wolfe gap)`,
        rows: algorithmRows,
        usesWolfeFallback: !hasPrimal,
      });
    }
  }
  if (series.length === 0) {
    throw new Error("no curves to draw");
  }
  return series;
}

function gapOf(series: Series, row: TraceRow): number {
  return clip(series.usesWolfeFallback ? row.wolfeGap : (row.primalGap as number));
}

export function buildFigure(inputs: FigureInput[]): PanelSpec[] {
  const series = collectSeries(inputs);

  const gapVs = (x: (row: TraceRow) => number, xLog: boolean): CurveSpec[] =>
    series.map((s) => ({
      label: s.label,
      points: s.rows
        .filter((row) => !xLog || x(row) > 0)
        .map((row): [number, number] => [x(row), gapOf(s, row)]),
    }));

  const wolfeVs = (x: (row: TraceRow) => number, xLog: boolean): CurveSpec[] =>
    series.map((s) => ({
      label: s.label,
      points: s.rows
        .filter((row) => !xLog || x(row) > 0)
        .map((row): [number, number] => [x(row), clip(row.wolfeGap)]),
    }));

  return [
    {
      title: "gap vs iteration",
      xLabel: "iteration",
      yLabel: "gap",
      xLog: true,
      yLog: true,
      curves: gapVs((row) => row.iter, true),
    },
    {
      title: "gap vs time",
      xLabel: "seconds",
      yLabel: "gap",
      xLog: false,
      yLog: true,
      curves: gapVs((row) => row.elapsedS, false),
    },
    {
      title: "certificate vs iteration",
      xLabel: "iteration",
      yLabel: "wolfe gap",
      xLog: true,
      yLog: true,
      curves: wolfeVs((row) => row.iter, true),
    },
    {
      title: "certificate vs time",
      xLabel: "seconds",
      yLabel: "wolfe gap",
      xLog: false,
      yLog: true,
      curves: wolfeVs((row) => row.elapsedS, false),
    },
  ];
}
