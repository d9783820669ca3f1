import { existsSync, mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { parseRegret, parseSweep, parseTrace } from "../src/csv.js";
import { fig1, fig2, fig3 } from "../src/figures.js";
import { main, renderToString } from "../src/render.js";

const fixturePath = (name: string): string => new URL(`./fixtures/${name}`, import.meta.url).pathname;
const fixture = (name: string): string => readFileSync(fixturePath(name), "utf-8");

const DIVERGED_TRACE = [
  "t,optimizer,x0,f,grad_norm,V,W,delta_V,decrease_bound,certified,diverged",
  "0,boom,1,2,1,4,4,0,0,false,false",
  "1,boom,3,9,1,16,16,12,,false,false",
  "2,boom,9,81,1,100,100,84,,false,true",
  "0,tn_ok,1,2,1,4,4,0,0,true,false",
  "1,tn_ok,0.5,1,0.5,1,1,-3,-0.1,true,false",
  "2,tn_ok,0.25,0.5,0.2,0.2,0.2,-0.8,-0.05,true,false",
].join("\n");

describe("fig1", () => {
  it("marks the certified-region boundary within one grid step of 1.5", () => {
    const sweep = parseSweep(fixture("sweep.csv"));
    const svg = fig1(sweep, parseTrace(fixture("fig1.csv")));
    const m = svg.match(/data-crossing="([^"]+)"/);
    expect(m).not.toBeNull();
    const crossing = Number(m![1]);
    const step = sweep[1].gamma - sweep[0].gamma;
    expect(Math.abs(crossing - 1.5)).toBeLessThanOrEqual(step + 1e-12);
    expect(svg).toContain('data-panel="A"');
    expect(svg).toContain('data-panel="B"');
    expect(svg).toContain('data-series="discriminant"');
    expect(svg).toContain('data-series="ht_gamma_1.5"');
  });
});

describe("fig2", () => {
  it("splits fixed and time-normalized groups into panels", () => {
    const svg = fig2(parseTrace(fixture("fig2.csv")), null);
    expect(svg).toContain('data-panel="A"');
    expect(svg).toContain('data-panel="B"');
    expect(svg).toContain('data-series="tn_nagd"');
    expect(svg).toContain('data-series="nagd"');
  });

  it("marks diverged series at their truncation point", () => {
    const svg = fig2(parseTrace(DIVERGED_TRACE), null);
    expect(svg).toContain('data-marker="diverged"');
  });

  it("takes panel B from a second trace when one is given", () => {
    const svg = fig2(parseTrace(DIVERGED_TRACE), parseTrace(fixture("fig2.csv")));
    expect(svg).toContain('data-series="boom"');
    expect(svg).toContain('data-series="tn_gd"');
  });

  it("rejects an empty selection without writing anything", () => {
    expect(() => fig2(parseTrace(fixture("fig2.csv")), null, { selection: ["nonexistent"] })).toThrowError(
      /matches no optimizer/
    );
  });
});

describe("fig3", () => {
  it("renders four panels with both comparators", () => {
    const svg = fig3(parseTrace(fixture("fig3.csv")), parseRegret(fixture("fig3_regret.csv")));
    for (const tag of ["A", "B", "C", "D"]) {
      expect(svg).toContain(`data-panel="${tag}"`);
    }
    expect(svg).toContain('data-series="hindsight opt"');
    expect(svg).toContain('data-series="pointwise opt"');
    expect(svg).toContain('data-series="pointwise floor"');
  });

  it("renders three panels without the companion table", () => {
    const svg = fig3(parseTrace(fixture("fig3.csv")), null);
    expect(svg).toContain('data-panel="C"');
    expect(svg).not.toContain('data-panel="D"');
  });
});

describe("render CLI", () => {
  it("writes a non-empty SVG for every figure kind", () => {
    const dir = mkdtempSync(join(tmpdir(), "hotuner-render-"));
    const jobs: Array<[string, string[]]> = [
      ["fig1.svg", ["--kind", "fig1", "--csv", fixturePath("sweep.csv"), "--csv2", fixturePath("fig1.csv")]],
      ["fig2.svg", ["--kind", "fig2", "--csv", fixturePath("fig2.csv")]],
      [
        "fig3.svg",
        ["--kind", "fig3", "--csv", fixturePath("fig3.csv"), "--csv2", fixturePath("fig3_regret.csv")],
      ],
    ];
    for (const [name, args] of jobs) {
      const out = join(dir, name);
      expect(main([...args, "--out", out])).toBe(0);
      const text = readFileSync(out, "utf-8");
      expect(text.length).toBeGreaterThan(2000);
      expect(text.startsWith("<svg ")).toBe(true);
      expect(text.trimEnd().endsWith("</svg>")).toBe(true);
    }
  });

  it("is deterministic across reruns", () => {
    const args = { kind: "fig3", csv: fixturePath("fig3.csv"), csv2: fixturePath("fig3_regret.csv") };
    expect(renderToString(args)).toBe(renderToString(args));
  });

  it("fails with usage exit code when arguments are missing", () => {
    expect(main(["--kind", "fig1"])).toBe(2);
    expect(main(["--kind", "fig1", "--csv", "x", "--out", "y", "--bogus"])).toBe(2);
  });

  it("does not write a file when the selection is empty", () => {
    const dir = mkdtempSync(join(tmpdir(), "hotuner-render-"));
    const out = join(dir, "never.svg");
    const code = main([
      "--kind",
      "fig2",
      "--csv",
      fixturePath("fig2.csv"),
      "--out",
      out,
      "--series",
      "nonexistent",
    ]);
    expect(code).toBe(1);
    expect(existsSync(out)).toBe(false);
  });

  it("rejects unknown kinds", () => {
    expect(main(["--kind", "fig9", "--csv", "x.csv", "--out", "y.svg"])).toBe(1);
  });
});
