import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { buildFigure } from "../src/figure.js";
import { renderSvg } from "../src/svg.js";
import { main } from "../src/cli.js";

const FIXTURES = fileURLToPath(new URL("../fixtures", import.meta.url));

function figureInput(name: string, label?: string) {
  const path = resolve(FIXTURES, name);
  return { path, label, text: readFileSync(path, "utf8") };
}

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "lacg-fig-"));
}

describe("figure assembly", () => {
  it("produces four panels with one curve per algorithm", () => {
    const panels = buildFigure([figureInput("compare.csv")]);
    expect(panels).toHaveLength(4);
    for (const panel of panels) {
      expect(panel.curves).toHaveLength(2);
      for (const curve of panel.curves) {
        expect(curve.points.length).toBeGreaterThan(10);
      }
    }
    expect(panels[0].xLog && panels[0].yLog).toBe(true);
    expect(panels[1].xLog).toBe(false);
    expect(panels[1].yLog).toBe(true);
  });

  it("re-asserts monotonicity of monotone algorithm traces", () => {
    const text = readFileSync(resolve(FIXTURES, "compare.csv"), "utf8");
    const lines = text.trimEnd().split("\n");
    // tamper with one objective value of the away-step trace
    const idx = lines.findIndex((line, i) => i > 0 && line.startsWith("afw,") && i > 5);
    const cells = lines[idx].split(",");
    cells[3] = String(Number(cells[3]) + 100.0);
    lines[idx] = cells.join(",");
    expect(() => buildFigure([{ path: "tampered", text: lines.join("\n") + "\n" }])).toThrow(
      /not monotone/
    );
  });

  it("falls back to the wolfe gap with an annotated legend", () => {
    const panels = buildFigure([figureInput("no_reference.csv")]);
    for (const curve of panels[0].curves) {
      expect(curve.label).toMatch(/\(wolfe gap\)$/);
    }
  });

  it("clips gaps at the floor before the log transform", () => {
    const panels = buildFigure([figureInput("compare.csv")]);
    for (const panel of panels) {
      for (const curve of panel.curves) {
        for (const [, y] of curve.points) {
          expect(y).toBeGreaterThanOrEqual(1e-16);
        }
      }
    }
  });
});

describe("svg rendering", () => {
  it("is deterministic byte for byte", () => {
    const render = () => renderSvg(buildFigure([figureInput("compare.csv")]), "fixture");
    expect(render()).toEqual(render());
  });

  it("draws two curves in each of the four panels", () => {
    const svg = renderSvg(buildFigure([figureInput("compare.csv")]));
    const occurrences = svg.match(/<polyline class="curve"/g) ?? [];
    expect(occurrences).toHaveLength(8);
  });

  it("contains no timestamps or random identifiers", () => {
    const svg = renderSvg(buildFigure([figureInput("compare.csv")]), "t");
    expect(svg).not.toMatch(/\d{4}-\d{2}-\d{2}/);
    expect(svg.startsWith("<svg ")).toBe(true);
  });
});

describe("cli", () => {
  it("renders the fixture through the spec file", () => {
    const dir = tmp();
    const spec = join(dir, "fig.json");
    writeFileSync(
      spec,
      JSON.stringify({ csvs: [resolve(FIXTURES, "compare.csv")], title: "comparison" })
    );
    const out = join(dir, "fig.svg");
    expect(main(["render", "--spec", spec, "--out", out])).toBe(0);
    const first = readFileSync(out, "utf8");
    expect(main(["render", "--spec", spec, "--out", out])).toBe(0);
    expect(readFileSync(out, "utf8")).toEqual(first);
    expect(first).toContain("</svg>");
  });

  it("errors on an empty csv and writes no file", () => {
    const dir = tmp();
    const csv = join(dir, "empty.csv");
    writeFileSync(csv, "");
    const spec = join(dir, "fig.json");
    writeFileSync(spec, JSON.stringify({ csvs: [csv] }));
    const out = join(dir, "fig.svg");
    expect(main(["render", "--spec", spec, "--out", out])).toBe(1);
    expect(existsSync(out)).toBe(false);
  });

  it("rejects non-svg output", () => {
    const dir = tmp();
    const spec = join(dir, "fig.json");
    writeFileSync(spec, JSON.stringify({ csvs: [resolve(FIXTURES, "compare.csv")] }));
    expect(main(["render", "--spec", spec, "--out", join(dir, "fig.png")])).toBe(1);
  });

  it("reports usage errors", () => {
    expect(main([])).toBe(2);
    expect(main(["render", "--bogus", "x"])).toBe(2);
  });
});
