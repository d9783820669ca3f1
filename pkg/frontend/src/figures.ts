/**
 * Figure assembly from parsed harness CSVs.
 *
 * fig1: (A) decrease-form coefficients and discriminant over gamma with the
 *       certified-region boundary marked; (B) objective traces.
 * fig2: objective traces under the smoothness switch, fixed-normalizer
 *       panel versus time-normalized panel; diverged series truncated and
 *       marked.
 * fig3: objective traces, iterates with both comparators, average cost, and
 *       average regret with the pointwise floor.
 */

import { RegretTable, SweepRow, TraceRow, byOptimizer } from "./csv.js";
import { PanelSpec, Series, renderFigure } from "./svg.js";

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

/** Shades from light grey to black for the tuner gamma family. */
function familyShade(i: number, n: number): string {
  const level = n <= 1 ? 0 : Math.round(200 - (200 * i) / (n - 1));
  const hex = level.toString(16).padStart(2, "0");
  return `#${hex}${hex}${hex}`;
}

function styleFor(name: string, index: number, familyIndex: number, familySize: number): Partial<Series> {
  if (name === "gd") return { color: "#1f77b4", dash: "6,3" };
  if (name === "nagd") return { color: "#d62728", dash: "6,3" };
  if (name === "tn_gd") return { color: "#1f77b4", dash: "2,2" };
  if (name === "tn_nagd") return { color: "#d62728", dash: "2,2" };
  if (name === "adagrad") return { color: "#bcbd22" };
  if (name === "adam") return { color: "#2ca02c" };
  if (name.includes("1.5")) return { color: "#9467bd", dash: "7,3", width: 2 };
  if (name.startsWith("ht_gamma_")) return { color: familyShade(familyIndex, familySize) };
  if (name === "ht") return { color: "#9467bd", width: 2 };
  return { color: PALETTE[index % PALETTE.length] };
}

function applySelection(names: string[], selection?: string[]): string[] {
  if (!selection || selection.length === 0) return names;
  const kept = names.filter((n) => selection.includes(n));
  if (kept.length === 0) {
    throw new Error(`series selection [${selection.join(", ")}] matches no optimizer in the trace`);
  }
  return kept;
}

function traceSeries(
  groups: Map<string, TraceRow[]>,
  names: string[],
  value: (r: TraceRow) => number
): Series[] {
  const family = names.filter((n) => n.startsWith("ht_gamma_") && !n.includes("."));
  return names.map((name, i) => {
    const rows = groups.get(name)!;
    const style = styleFor(name, i, family.indexOf(name), family.length);
    return {
      label: name,
      points: rows.map((r) => [r.t, value(r)] as [number, number]),
      color: style.color ?? "#333",
      dash: style.dash,
      width: style.width,
      endMarker: rows[rows.length - 1].diverged,
    };
  });
}

export interface FigureOptions {
  selection?: string[];
  linearY?: boolean;
}

export function fig1(sweep: SweepRow[], trace: TraceRow[], opts: FigureOptions = {}): string {
  if (sweep.length < 2) throw new Error("sweep CSV needs at least two grid points");
  const finite = (v: number) => (Number.isFinite(v) ? v : NaN);
  const curves: Array<[string, (r: SweepRow) => number, string]> = [
    ["c_grad", (r) => r.cGrad, "#1f77b4"],
    ["c_cross", (r) => r.cCross, "#ff7f0e"],
    ["c_dist", (r) => finite(r.cDist), "#d62728"],
    ["discriminant", (r) => finite(r.discriminant), "#2ca02c"],
  ];
  // boundary of the certified region: last gamma still certified
  let crossing: number | null = null;
  for (let i = 0; i + 1 < sweep.length; i++) {
    if (sweep[i].verdict && !sweep[i + 1].verdict) {
      crossing = sweep[i].gamma;
      break;
    }
  }
  const panelA: PanelSpec = {
    tag: "A",
    title: "Sufficient conditions over gamma",
    xLabel: "gamma",
    yLabel: "coefficient value",
    yClamp: [-40, 80],
    series: curves.map(([label, pick, color]) => ({
      label,
      color,
      points: sweep.map((r) => [r.gamma, pick(r)] as [number, number]),
      width: label === "discriminant" ? 2 : 1.2,
    })),
    vlines: crossing === null ? [] : [{ x: crossing, label: `boundary ${crossing.toFixed(3)}`, color: "#2ca02c" }],
  };

  const groups = byOptimizer(trace);
  const names = applySelection([...groups.keys()], opts.selection);
  const panelB: PanelSpec = {
    tag: "B",
    title: "Objective value over time",
    xLabel: "t",
    yLabel: opts.linearY ? "f(x_t)" : "f(x_t) (log scale)",
    logY: !opts.linearY,
    series: traceSeries(groups, names, (r) => r.f),
  };
  const attrs: Record<string, string> = {};
  if (crossing !== null) attrs["data-crossing"] = String(crossing);
  return renderFigure([panelA, panelB], attrs, 2);
}

export function fig2(trace: TraceRow[], trace2: TraceRow[] | null, opts: FigureOptions = {}): string {
  // one combined trace: fixed-normalizer group in panel A, time-normalized
  // group in panel B (names with the tn_ prefix), the tuner in both.
  // A second CSV, when given, supplies panel B instead.
  const groups = byOptimizer(trace);
  const names = applySelection([...groups.keys()], opts.selection);
  let aNames = names.filter((n) => !n.startsWith("tn_"));
  let bGroups = groups;
  let bNames = names.filter((n) => n.startsWith("tn_") || n === "ht" || n.includes("1.5"));
  if (trace2) {
    bGroups = byOptimizer(trace2);
    bNames = applySelection([...bGroups.keys()], opts.selection);
  }
  if (aNames.length === 0 || bNames.length === 0) {
    throw new Error("fig2 needs both a fixed-normalizer group and a time-normalized group");
  }
  const mk = (tag: string, title: string, grp: Map<string, TraceRow[]>, ns: string[]): PanelSpec => ({
    tag,
    title,
    xLabel: "t",
    yLabel: opts.linearY ? "f(x_t)" : "f(x_t) (log scale)",
    logY: !opts.linearY,
    series: traceSeries(grp, ns, (r) => r.f),
  });
  return renderFigure(
    [mk("A", "Fixed normalizer", groups, aNames), mk("B", "Time-varying normalizer", bGroups, bNames)],
    {},
    2
  );
}

export function fig3(trace: TraceRow[], regret: RegretTable | null, opts: FigureOptions = {}): string {
  const groups = byOptimizer(trace);
  const names = applySelection([...groups.keys()], opts.selection);

  const panelA: PanelSpec = {
    tag: "A",
    title: "Objective value over time",
    xLabel: "t",
    yLabel: opts.linearY ? "f(x_t)" : "f(x_t) (log scale)",
    logY: !opts.linearY,
    series: traceSeries(groups, names, (r) => r.f),
  };

  const iterates = traceSeries(groups, names, (r) => r.x[0]);
  if (regret) {
    iterates.push({
      label: "hindsight opt",
      color: "#e377c2",
      width: 2,
      points: regret.t.map((t, i) => [t, regret.xbar[i]] as [number, number]),
    });
    if (regret.xstar) {
      iterates.push({
        label: "pointwise opt",
        color: "#7f7f7f",
        dash: "4,3",
        points: regret.t.map((t, i) => [t, regret.xstar![i]] as [number, number]),
      });
    }
  }
  const panelB: PanelSpec = {
    tag: "B",
    title: "Iterates and comparators",
    xLabel: "t",
    yLabel: "x_t",
    series: iterates,
  };

  // running average cost, computed from the trace alone
  const avgCost: Series[] = names.map((name, i) => {
    const rows = groups.get(name)!;
    let acc = 0;
    const pts = rows.map((r, k) => {
      acc += r.f;
      return [r.t, acc / (k + 1)] as [number, number];
    });
    const style = styleFor(name, i, -1, 0);
    return { label: name, points: pts, color: style.color ?? "#333", dash: style.dash, width: style.width };
  });
  if (regret) {
    avgCost.push({
      label: "hindsight opt",
      color: "#e377c2",
      width: 2,
      points: regret.t.map((t, i) => [t, regret.avgComparatorCost[i]] as [number, number]),
    });
  }
  const panelC: PanelSpec = {
    tag: "C",
    title: "Average cost",
    xLabel: "t",
    yLabel: "cumulative cost / t",
    series: avgCost,
  };

  const panels = [panelA, panelB, panelC];
  if (regret) {
    const regSeries: Series[] = [...regret.avgRegret.entries()]
      .filter(([n]) => names.includes(n))
      .map(([n, vals], i) => {
        const style = styleFor(n, i, -1, 0);
        return {
          label: n,
          points: regret.t.map((t, k) => [t, vals[k]] as [number, number]),
          color: style.color ?? "#333",
          dash: style.dash,
          width: style.width,
        };
      });
    if (regret.regretFloor) {
      regSeries.push({
        label: "pointwise floor",
        color: "#7f7f7f",
        dash: "4,3",
        points: regret.t.map((t, i) => [t, regret.regretFloor![i]] as [number, number]),
      });
    }
    panels.push({
      tag: "D",
      title: "Average regret",
      xLabel: "t",
      yLabel: "regret / t",
      series: regSeries,
    });
  }
  return renderFigure(panels, {}, 2);
}
