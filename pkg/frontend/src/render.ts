#!/usr/bin/env node
/**
 * Figure renderer CLI.
 *
 *   render --kind fig1 --csv sweep.csv --csv2 fig1.csv --out fig1.svg
 *   render --kind fig2 --csv fig2.csv [--csv2 second.csv] --out fig2.svg
 *   render --kind fig3 --csv fig3.csv --csv2 fig3_regret.csv --out fig3.svg
 *
 * Options: --series a,b,c (subset of optimizers), --linear (no log scale).
 * Reads only the documented CSV contracts; writes one SVG image.
 */

import { writeFileSync } from "fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { parseRegret, parseSweep, parseTrace, readText } from "./csv.js";
import { FigureOptions, fig1, fig2, fig3 } from "./figures.js";

export function renderToString(opts: {
  kind: string;
  csv: string;
  csv2?: string;
  series?: string;
  linear?: boolean;
}): string {
  const figOpts: FigureOptions = {
    selection: opts.series ? opts.series.split(",").map((s) => s.trim()).filter(Boolean) : undefined,
    linearY: Boolean(opts.linear),
  };
  switch (opts.kind) {
    case "fig1": {
      if (!opts.csv2) throw new Error("fig1 needs --csv (sweep) and --csv2 (trace)");
      return fig1(parseSweep(readText(opts.csv)), parseTrace(readText(opts.csv2)), figOpts);
    }
    case "fig2": {
      const second = opts.csv2 ? parseTrace(readText(opts.csv2)) : null;
      return fig2(parseTrace(readText(opts.csv)), second, figOpts);
    }
    case "fig3": {
      const regret = opts.csv2 ? parseRegret(readText(opts.csv2)) : null;
      return fig3(parseTrace(readText(opts.csv)), regret, figOpts);
    }
    default:
      throw new Error(`unknown figure kind ${opts.kind}; expected fig1, fig2, or fig3`);
  }
}

export function main(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        csv: { type: "string" },
        csv2: { type: "string" },
        out: { type: "string" },
        series: { type: "string" },
        linear: { type: "boolean", default: false },
      },
    }));
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  if (!values.kind || !values.csv || !values.out) {
    console.error("usage: render --kind fig1|fig2|fig3 --csv <path> [--csv2 <path>] --out <image path>");
    return 2;
  }
  try {
    const svg = renderToString({
      kind: values.kind,
      csv: values.csv,
      csv2: values.csv2,
      series: values.series,
      linear: values.linear,
    });
    writeFileSync(values.out, svg);
    console.log(`wrote ${values.out}`);
    return 0;
  } catch (err) {
    console.error(`render failed: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
