/**
 * Select view: one polyline per hidden state over the visible window, token
 * axis with fixed word width, dashed threshold line, on-count heatmap under
 * the tokens, and mouse brushing that reports an absolute token range.
 */

import { countColor } from "./color";
import type { ContextResponse } from "./types";
import type { SelectionRange, UiState } from "./urlState";

const SVG_NS = "http://www.w3.org/2000/svg";
const PLOT_HEIGHT = 240;

/** Above this many states, lines render thin and without hover targets. */
export const THIN_LINE_CUTOFF = 500;

export interface SelectViewModel {
  context: ContextResponse;
  state: UiState;
  /** State indices highlighted from the latest selection, if any. */
  selectedStates: number[];
}

export interface SelectViewHandlers {
  onBrush(range: SelectionRange): void;
}

/** Shorten a token to fit its word slot, keeping both ends visible. */
export function truncateMiddle(token: string, maxChars: number): string {
  if (maxChars < 3) maxChars = 3;
  if (token.length <= maxChars) return token;
  const keep = maxChars - 1;
  const head = Math.ceil(keep / 2);
  return token.slice(0, head) + "…" + token.slice(token.length - (keep - head));
}

/** Count of highlighted states that are on at each visible position. */
export function onCounts(
  values: number[][],
  selected: number[],
  threshold: number,
): number[] {
  return values.map(
    (row) => selected.filter((c) => row[c] >= threshold).length,
  );
}

function valueRange(values: number[][]): { min: number; max: number } {
  let min = Infinity;
  let max = -Infinity;
  for (const row of values) {
    for (const v of row) {
      if (v < min) min = v;
      if (v > max) max = v;
    }
  }
  if (min > max) return { min: 0, max: 1 };
  if (min === max) return { min: min - 1, max: max + 1 };
  return { min, max };
}

export function renderSelectView(
  root: HTMLElement,
  model: SelectViewModel,
  handlers: SelectViewHandlers,
): void {
  const { context, state, selectedStates } = model;
  const tokens = context.tokens;
  const count = tokens.length;
  const dims = context.values[0]?.length ?? 0;
  const ww = state.wordWidth;
  const width = count * ww;
  const thin = dims > THIN_LINE_CUTOFF;
  const { min, max } = valueRange(context.values);
  const yScale = (v: number) =>
    PLOT_HEIGHT - ((v - min) / (max - min)) * PLOT_HEIGHT;
  const selectedSet = new Set(selectedStates);

  root.replaceChildren();

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(PLOT_HEIGHT));
  svg.setAttribute("class", thin ? "select-plot thin" : "select-plot");

  for (let c = 0; c < dims; c++) {
    const line = document.createElementNS(SVG_NS, "polyline");
    const points = context.values
      .map((row, i) => `${i * ww + ww / 2},${yScale(row[c])}`)
      .join(" ");
    line.setAttribute("points", points);
    line.setAttribute("fill", "none");
    line.setAttribute(
      "class",
      selectedSet.has(c) ? "state-line selected" : "state-line",
    );
    line.dataset.state = String(c);
    if (thin) {
      line.setAttribute("pointer-events", "none");
    } else {
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `state ${c}`;
      line.appendChild(title);
    }
    svg.appendChild(line);
  }

  const thresholdLine = document.createElementNS(SVG_NS, "line");
  const y = yScale(state.threshold);
  thresholdLine.setAttribute("x1", "0");
  thresholdLine.setAttribute("x2", String(width));
  thresholdLine.setAttribute("y1", String(y));
  thresholdLine.setAttribute("y2", String(y));
  thresholdLine.setAttribute("class", "threshold-line");
  thresholdLine.setAttribute("stroke-dasharray", "6 4");
  svg.appendChild(thresholdLine);

  const capture = document.createElementNS(SVG_NS, "rect");
  capture.setAttribute("x", "0");
  capture.setAttribute("y", "0");
  capture.setAttribute("width", String(width));
  capture.setAttribute("height", String(PLOT_HEIGHT));
  capture.setAttribute("fill", "transparent");
  capture.setAttribute("class", "brush-capture");
  svg.appendChild(capture);
  root.appendChild(svg);

  const axis = document.createElement("div");
  axis.className = "token-axis";
  const budget = Math.max(3, Math.floor(ww / 8));
  tokens.forEach((token, i) => {
    const span = document.createElement("span");
    span.className = "token";
    span.style.width = `${ww}px`;
    span.textContent = truncateMiddle(token, budget);
    span.title = token;
    span.dataset.index = String(i);
    const absolute = context.start + i;
    if (
      state.selection !== null &&
      absolute >= state.selection.start &&
      absolute <= state.selection.end
    ) {
      span.classList.add("selected");
    }
    axis.appendChild(span);
  });
  root.appendChild(axis);

  const counts = onCounts(context.values, selectedStates, state.threshold);
  const maxCount = Math.max(1, selectedStates.length);
  const strip = document.createElement("div");
  strip.className = "on-count-strip";
  counts.forEach((value, i) => {
    const cell = document.createElement("div");
    cell.className = "on-count-cell";
    cell.style.width = `${ww}px`;
    cell.style.backgroundColor = countColor(value, maxCount);
    cell.dataset.count = String(value);
    cell.title = `${tokens[i]}: ${value} of ${selectedStates.length} on`;
    strip.appendChild(cell);
  });
  root.appendChild(strip);

  const toIndex = (event: MouseEvent): number => {
    const left = svg.getBoundingClientRect().left;
    const raw = Math.floor((event.clientX - left) / ww);
    return Math.min(Math.max(raw, 0), count - 1);
  };
  let anchor: number | null = null;
  capture.addEventListener("mousedown", (event) => {
    anchor = toIndex(event as MouseEvent);
  });
  capture.addEventListener("mousemove", (event) => {
    if (anchor === null) return;
    const current = toIndex(event as MouseEvent);
    const lo = Math.min(anchor, current);
    const hi = Math.max(anchor, current);
    axis.querySelectorAll(".token").forEach((span, i) => {
      span.classList.toggle("brushing", i >= lo && i <= hi);
    });
  });
  capture.addEventListener("mouseup", (event) => {
    if (anchor === null) return;
    const current = toIndex(event as MouseEvent);
    const range = {
      start: context.start + Math.min(anchor, current),
      end: context.start + Math.max(anchor, current),
    };
    anchor = null;
    handlers.onBrush(range);
  });
}
