/**
 * Minimal deterministic SVG line-panel builder: fixed layout, no runtime
 * dependencies, identical output for identical inputs.
 */

export interface Series {
  label: string;
  points: Array<[number, number]>;
  color: string;
  dash?: string;
  width?: number;
  /** draw an X at the final point (used for divergence truncation) */
  endMarker?: boolean;
}

export interface VLine {
  x: number;
  label: string;
  color?: string;
}

export interface PanelSpec {
  tag: string;
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  logY?: boolean;
  /** clamp the y range before autoscaling (soft window for spiky data) */
  yClamp?: [number, number];
  vlines?: VLine[];
}

const PANEL_W = 420;
const PANEL_H = 330;
const MARGIN = { left: 58, right: 16, top: 34, bottom: 42 };

const fmt = (v: number): string => {
  if (!Number.isFinite(v)) return "0";
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
};

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

function tickLabel(v: number, logY: boolean): string {
  const val = logY ? Math.pow(10, v) : v;
  if (val !== 0 && (Math.abs(val) >= 1e4 || Math.abs(val) < 1e-2)) {
    return val.toExponential(0);
  }
  return String(Math.round(val * 100) / 100);
}

function niceTicks(lo: number, hi: number, n = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const err = span / (n * step);
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) {
    out.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return out;
}

function panelSvg(spec: PanelSpec, ox: number, oy: number): string {
  const innerW = PANEL_W - MARGIN.left - MARGIN.right;
  const innerH = PANEL_H - MARGIN.top - MARGIN.bottom;

  const transformY = (y: number): number => (spec.logY ? Math.log10(Math.max(y, 1e-300)) : y);
  let xs: number[] = [];
  let ys: number[] = [];
  for (const s of spec.series) {
    for (const [x, y] of s.points) {
      if (!Number.isFinite(x)) continue;
      let ty = transformY(y);
      if (!Number.isFinite(ty)) continue;
      if (spec.yClamp) ty = Math.min(Math.max(ty, spec.yClamp[0]), spec.yClamp[1]);
      xs.push(x);
      ys.push(ty);
    }
  }
  for (const v of spec.vlines ?? []) xs.push(v.x);
  if (xs.length === 0) throw new Error(`panel ${spec.tag}: no finite data to plot`);
  let [xLo, xHi] = [Math.min(...xs), Math.max(...xs)];
  let [yLo, yHi] = [Math.min(...ys), Math.max(...ys)];
  if (xHi === xLo) xHi = xLo + 1;
  if (yHi === yLo) {
    yLo -= 0.5;
    yHi += 0.5;
  }
  const yPad = 0.05 * (yHi - yLo);
  yLo -= yPad;
  yHi += yPad;

  const px = (x: number): number => MARGIN.left + ((x - xLo) / (xHi - xLo)) * innerW;
  const py = (yt: number): number => MARGIN.top + innerH - ((yt - yLo) / (yHi - yLo)) * innerH;

  const parts: string[] = [];
  parts.push(`<g data-panel="${esc(spec.tag)}" transform="translate(${ox},${oy})">`);
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${innerW}" height="${innerH}" fill="white" stroke="#444" stroke-width="1"/>`
  );
  parts.push(
    `<text x="${PANEL_W / 2}" y="${MARGIN.top - 12}" text-anchor="middle" font-size="13" font-weight="bold">${esc(spec.title)}</text>`
  );

  for (const tx of niceTicks(xLo, xHi)) {
    const X = px(tx);
    parts.push(`<line x1="${fmt(X)}" y1="${MARGIN.top + innerH}" x2="${fmt(X)}" y2="${MARGIN.top + innerH + 4}" stroke="#444"/>`);
    parts.push(
      `<text x="${fmt(X)}" y="${MARGIN.top + innerH + 16}" text-anchor="middle" font-size="10">${tickLabel(tx, false)}</text>`
    );
  }
  for (const ty of niceTicks(yLo, yHi)) {
    const Y = py(ty);
    parts.push(`<line x1="${MARGIN.left - 4}" y1="${fmt(Y)}" x2="${MARGIN.left}" y2="${fmt(Y)}" stroke="#444"/>`);
    parts.push(
      `<text x="${MARGIN.left - 7}" y="${fmt(Y + 3)}" text-anchor="end" font-size="10">${tickLabel(ty, Boolean(spec.logY))}</text>`
    );
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(Y)}" x2="${MARGIN.left + innerW}" y2="${fmt(Y)}" stroke="#ddd" stroke-width="0.5"/>`
    );
  }
  parts.push(
    `<text x="${PANEL_W / 2}" y="${PANEL_H - 8}" text-anchor="middle" font-size="11">${esc(spec.xLabel)}</text>`
  );
  parts.push(
    `<text x="14" y="${PANEL_H / 2}" text-anchor="middle" font-size="11" transform="rotate(-90 14 ${PANEL_H / 2})">${esc(
      spec.yLabel
    )}</text>`
  );

  for (const v of spec.vlines ?? []) {
    const X = px(v.x);
    parts.push(
      `<line x1="${fmt(X)}" y1="${MARGIN.top}" x2="${fmt(X)}" y2="${MARGIN.top + innerH}" stroke="${v.color ?? "#999"}" stroke-dasharray="5,3"/>`
    );
    parts.push(
      `<text x="${fmt(X + 4)}" y="${MARGIN.top + 12}" font-size="10" fill="${v.color ?? "#666"}">${esc(v.label)}</text>`
    );
  }

  for (const s of spec.series) {
    const pts: string[] = [];
    let lastXY: [number, number] | null = null;
    for (const [x, y] of s.points) {
      let ty = transformY(y);
      if (!Number.isFinite(x) || !Number.isFinite(ty)) continue;
      if (spec.yClamp) ty = Math.min(Math.max(ty, spec.yClamp[0]), spec.yClamp[1]);
      const X = px(x);
      const Y = py(ty);
      pts.push(`${fmt(X)},${fmt(Y)}`);
      lastXY = [X, Y];
    }
    if (pts.length === 0) continue;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<polyline data-series="${esc(s.label)}" points="${pts.join(" ")}" fill="none" stroke="${s.color}" stroke-width="${s.width ?? 1.4}"${dash}/>`
    );
    if (s.endMarker && lastXY) {
      const [X, Y] = lastXY;
      parts.push(
        `<path data-marker="diverged" d="M ${fmt(X - 4)} ${fmt(Y - 4)} L ${fmt(X + 4)} ${fmt(Y + 4)} M ${fmt(X - 4)} ${fmt(
          Y + 4
        )} L ${fmt(X + 4)} ${fmt(Y - 4)}" stroke="${s.color}" stroke-width="2"/>`
      );
    }
  }

  // legend
  let ly = MARGIN.top + 8;
  for (const s of spec.series) {
    const lx = MARGIN.left + innerW - 120;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 18}" y2="${ly}" stroke="${s.color}" stroke-width="2"${dash}/>`);
    parts.push(`<text x="${lx + 22}" y="${ly + 3}" font-size="10">${esc(s.label)}</text>`);
    ly += 13;
  }
  parts.push("</g>");
  return parts.join("\n");
}

export function renderFigure(
  panels: PanelSpec[],
  attrs: Record<string, string> = {},
  columns = 2
): string {
  if (panels.length === 0) throw new Error("no panels to render");
  const cols = Math.min(columns, panels.length);
  const rows = Math.ceil(panels.length / cols);
  const width = cols * PANEL_W;
  const height = rows * PANEL_H;
  const extra = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${esc(v)}"`)
    .join("");
  const body = panels
    .map((p, i) => panelSvg(p, (i % cols) * PANEL_W, Math.floor(i / cols) * PANEL_H))
    .join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" font-family="sans-serif"${extra}>\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n${body}\n</svg>\n`
  );
}
