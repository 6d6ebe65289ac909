/**
 * `render --spec fig.json --out fig.svg`
 *
 * The spec JSON lists the trace CSVs to draw:
 *   { "csvs": ["cmp.csv", {"path": "afw.csv", "label": "away steps"}],
 *     "title": "simplex, n=200" }
 * CSV paths resolve relative to the spec file. Output is deterministic
 * SVG; other extensions are rejected. Exit codes: 0 ok, 1 data error,
 * 2 usage error.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { dirname, resolve } from "node:path";
import { pathToFileURL } from "node:url";

import { buildFigure, FigureInput } from "./figure.js";
import { renderSvg } from "./svg.js";

interface SpecFile {
  csvs: Array<string | { path: string; label?: string }>;
  title?: string;
}

export function loadInputs(specPath: string): { inputs: FigureInput[]; title?: string } {
  const spec = JSON.parse(readFileSync(specPath, "utf8")) as SpecFile;
  if (!Array.isArray(spec.csvs) || spec.csvs.length === 0) {
    throw new Error("spec must list at least one CSV in `csvs`");
  }
  const base = dirname(resolve(specPath));
  const inputs = spec.csvs.map((entry) => {
    const item = typeof entry === "string" ? { path: entry } : entry;
    const full = resolve(base, item.path);
    return { path: item.path, label: item.label, text: readFileSync(full, "utf8") };
  });
  return { inputs, title: spec.title };
}

export function renderToFile(specPath: string, outPath: string): void {
  if (!outPath.endsWith(".svg")) {
    throw new Error("only .svg output is supported (vector output is the deterministic format)");
  }
  const { inputs, title } = loadInputs(specPath);
  const svg = renderSvg(buildFigure(inputs), title);
  writeFileSync(outPath, svg);
}

export function main(argv: string[]): number {
  const args = [...argv];
  if (args[0] !== "render") {
    console.error("usage: render --spec fig.json --out fig.svg");
    return 2;
  }
  let specPath: string | undefined;
  let outPath: string | undefined;
  for (let i = 1; i < args.length; i += 2) {
    if (args[i] === "--spec") specPath = args[i + 1];
    else if (args[i] === "--out") outPath = args[i + 1];
    else {
      console.error(`unknown argument ${args[i]}`);
      return 2;
    }
  }
  if (!specPath || !outPath) {
    console.error("usage: render --spec fig.json --out fig.svg");
    return 2;
  }
  try {
    renderToFile(specPath, outPath);
  } catch (error) {
    console.error(`render failed: ${(error as Error).message}`);
    return 1;
  }
  console.log(`wrote ${outPath}`);
  return 0;
}

if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
