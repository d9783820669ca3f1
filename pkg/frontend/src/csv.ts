/**
 * Parsers for the harness CSV contracts.
 *
 * Trace:  t,optimizer,x0..x{d-1},f,grad_norm,V,W,delta_V,decrease_bound,certified,diverged
 * Sweep:  gamma,c_grad,c_cross,c_dist,discriminant,verdict
 * Regret: t,xbar0..,xstar0..,avg_comparator_cost,avg_regret_<name>...,regret_floor
 *
 * Empty cells mean "not applicable" and parse to null.  Malformed cells
 * raise errors naming the 1-based data row and the column.
 */

import { readFileSync } from "fs";

export interface TraceRow {
  t: number;
  optimizer: string;
  x: number[];
  f: number;
  gradNorm: number;
  v: number | null;
  w: number | null;
  deltaV: number | null;
  decreaseBound: number | null;
  certified: boolean;
  diverged: boolean;
}

export interface SweepRow {
  gamma: number;
  cGrad: number;
  cCross: number;
  cDist: number;
  discriminant: number;
  verdict: boolean;
}

export interface RegretTable {
  t: number[];
  xbar: number[];
  xstar: number[] | null;
  avgComparatorCost: number[];
  avgRegret: Map<string, number[]>;
  regretFloor: number[] | null;
}

function splitCsv(text: string): string[][] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new Error("CSV has no data rows");
  }
  return lines.map((l) => l.split(","));
}

function numberAt(cell: string, row: number, column: string): number {
  const v = Number(cell);
  if (cell === "" || !Number.isFinite(v)) {
    // infinities are legal in sweep output; reject only genuine junk
    if (cell === "inf") return Infinity;
    if (cell === "-inf") return -Infinity;
    throw new Error(`row ${row}, column ${column}: expected a number, got "${cell}"`);
  }
  return v;
}

function optionalAt(cell: string, row: number, column: string): number | null {
  return cell === "" ? null : numberAt(cell, row, column);
}

function boolAt(cell: string, row: number, column: string): boolean {
  if (cell === "true") return true;
  if (cell === "false") return false;
  throw new Error(`row ${row}, column ${column}: expected true/false, got "${cell}"`);
}

export function parseTrace(text: string): TraceRow[] {
  const rows = splitCsv(text);
  const header = rows[0];
  const xCols = header.filter((h) => /^x\d+$/.test(h));
  const expected = ["t", "optimizer", ...xCols, "f", "grad_norm", "V", "W", "delta_V", "decrease_bound", "certified", "diverged"];
  if (header.join(",") !== expected.join(",")) {
    throw new Error(`unexpected trace header: ${header.join(",")}`);
  }
  const out: TraceRow[] = [];
  for (let i = 1; i < rows.length; i++) {
    const r = rows[i];
    if (r.length !== header.length) {
      throw new Error(`row ${i}: expected ${header.length} cells, got ${r.length}`);
    }
    let k = 0;
    const t = numberAt(r[k++], i, "t");
    const optimizer = r[k++];
    const x = xCols.map((c) => numberAt(r[k++], i, c));
    out.push({
      t,
      optimizer,
      x,
      f: numberAt(r[k++], i, "f"),
      gradNorm: numberAt(r[k++], i, "grad_norm"),
      v: optionalAt(r[k++], i, "V"),
      w: optionalAt(r[k++], i, "W"),
      deltaV: optionalAt(r[k++], i, "delta_V"),
      decreaseBound: optionalAt(r[k++], i, "decrease_bound"),
      certified: boolAt(r[k++], i, "certified"),
      diverged: boolAt(r[k++], i, "diverged"),
    });
  }
  return out;
}

export function parseSweep(text: string): SweepRow[] {
  const rows = splitCsv(text);
  const expected = "gamma,c_grad,c_cross,c_dist,discriminant,verdict";
  if (rows[0].join(",") !== expected) {
    throw new Error(`unexpected sweep header: ${rows[0].join(",")}`);
  }
  const out: SweepRow[] = [];
  for (let i = 1; i < rows.length; i++) {
    const r = rows[i];
    if (r.length !== 6) {
      throw new Error(`row ${i}: expected 6 cells, got ${r.length}`);
    }
    out.push({
      gamma: numberAt(r[0], i, "gamma"),
      cGrad: numberAt(r[1], i, "c_grad"),
      cCross: numberAt(r[2], i, "c_cross"),
      cDist: numberAt(r[3], i, "c_dist"),
      discriminant: numberAt(r[4], i, "discriminant"),
      verdict: boolAt(r[5], i, "verdict"),
    });
  }
  return out;
}

export function parseRegret(text: string): RegretTable {
  const rows = splitCsv(text);
  const header = rows[0];
  const idx = (name: string) => header.indexOf(name);
  if (idx("t") !== 0 || idx("xbar0") < 0 || idx("avg_comparator_cost") < 0) {
    throw new Error(`unexpected regret header: ${header.join(",")}`);
  }
  const regretNames = header.filter((h) => h.startsWith("avg_regret_")).map((h) => h.slice("avg_regret_".length));
  const table: RegretTable = {
    t: [],
    xbar: [],
    xstar: idx("xstar0") >= 0 ? [] : null,
    avgComparatorCost: [],
    avgRegret: new Map(regretNames.map((n) => [n, []])),
    regretFloor: idx("regret_floor") >= 0 ? [] : null,
  };
  for (let i = 1; i < rows.length; i++) {
    const r = rows[i];
    if (r.length !== header.length) {
      throw new Error(`row ${i}: expected ${header.length} cells, got ${r.length}`);
    }
    table.t.push(numberAt(r[idx("t")], i, "t"));
    table.xbar.push(numberAt(r[idx("xbar0")], i, "xbar0"));
    if (table.xstar) table.xstar.push(numberAt(r[idx("xstar0")], i, "xstar0"));
    table.avgComparatorCost.push(numberAt(r[idx("avg_comparator_cost")], i, "avg_comparator_cost"));
    for (const n of regretNames) {
      table.avgRegret.get(n)!.push(numberAt(r[idx("avg_regret_" + n)], i, "avg_regret_" + n));
    }
    if (table.regretFloor) table.regretFloor.push(numberAt(r[idx("regret_floor")], i, "regret_floor"));
  }
  return table;
}

export function readText(path: string): string {
  return readFileSync(path, "utf-8");
}

/** Group trace rows per optimizer, preserving declaration order. */
export function byOptimizer(rows: TraceRow[]): Map<string, TraceRow[]> {
  const out = new Map<string, TraceRow[]>();
  for (const r of rows) {
    const got = out.get(r.optimizer);
    if (got) got.push(r);
    else out.set(r.optimizer, [r]);
  }
  return out;
}
