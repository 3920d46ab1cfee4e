/**
 * Match view: the ranked ranges as rows of tokens, a match-count heatmap
 * per row (values are the API's per_position_overlap, untouched), one
 * heatmap per active annotation track, and hover-linking between a token
 * and its heatmap cells. Rows appear exactly in response order.
 */

import { categoryColor, countColor } from "./color";
import type { MatchEntry, MatchResponse, TrackWindow } from "./types";
import type { UiState } from "./urlState";
import { truncateMiddle } from "./selectView";

function linkCells(row: HTMLElement, col: number, on: boolean): void {
  row.querySelectorAll(`[data-col="${col}"]`).forEach((cell) => {
    cell.classList.toggle("linked", on);
  });
}

function heatRow(
  kind: string,
  cells: { color: string; value: string; title: string }[],
  wordWidth: number,
): HTMLElement {
  const row = document.createElement("div");
  row.className = "heat-row";
  row.dataset.kind = kind;
  cells.forEach((cell, i) => {
    const el = document.createElement("div");
    el.className = "heat-cell";
    el.style.width = `${wordWidth}px`;
    el.style.backgroundColor = cell.color;
    el.dataset.value = cell.value;
    el.dataset.col = String(i);
    el.title = cell.title;
    row.appendChild(el);
  });
  return row;
}

function trackHeatRow(track: TrackWindow, wordWidth: number): HTMLElement {
  const maxId = Math.max(1, ...track.ids);
  const cells = track.ids.map((id, i) => ({
    color:
      track.kind === "categorical" ? categoryColor(id) : countColor(id, maxId),
    value: String(id),
    title: track.labels ? track.labels[i] : String(id),
  }));
  return heatRow(`track:${track.name}`, cells, wordWidth);
}

function renderEntry(
  entry: MatchEntry,
  rank: number,
  maxOverlap: number,
  state: UiState,
): HTMLElement {
  const row = document.createElement("div");
  row.className = "match-row";
  row.dataset.start = String(entry.start);
  row.dataset.end = String(entry.end);
  row.dataset.rank = String(rank);

  const meta = document.createElement("div");
  meta.className = "match-meta";
  meta.textContent =
    `${entry.start}–${entry.end}  ` +
    `overlap ${entry.overlap} / union ${entry.union}`;
  row.appendChild(meta);

  const words = document.createElement("div");
  words.className = "match-tokens";
  const budget = Math.max(3, Math.floor(state.wordWidth / 8));
  entry.tokens.forEach((token, i) => {
    const span = document.createElement("span");
    span.className = "match-token";
    span.style.width = `${state.wordWidth}px`;
    span.textContent = truncateMiddle(token, budget);
    span.title = token;
    span.dataset.col = String(i);
    if (state.mapOnWords) {
      span.style.backgroundColor = countColor(
        entry.per_position_overlap[i],
        maxOverlap,
      );
    }
    span.addEventListener("mouseenter", () => linkCells(row, i, true));
    span.addEventListener("mouseleave", () => linkCells(row, i, false));
    words.appendChild(span);
  });
  row.appendChild(words);

  const countCells = entry.per_position_overlap.map((value, i) => ({
    color: countColor(value, maxOverlap),
    value: String(value),
    title: `${entry.tokens[i]}: ${value} selected states on`,
  }));
  row.appendChild(heatRow("count", countCells, state.wordWidth));

  for (const name of state.tracks) {
    const track = entry.tracks.find((t) => t.name === name);
    if (track) row.appendChild(trackHeatRow(track, state.wordWidth));
  }
  return row;
}

export function renderMatchView(
  root: HTMLElement,
  response: MatchResponse | null,
  state: UiState,
): void {
  root.replaceChildren();
  if (response === null) {
    const hint = document.createElement("div");
    hint.className = "match-hint";
    hint.textContent = "Brush a token range above to query for matches.";
    root.appendChild(hint);
    return;
  }
  if (response.matches.length === 0) {
    const empty = document.createElement("div");
    empty.className = "empty-state";
    empty.textContent =
      "No ranges matched this selection. Lower the threshold, drop a " +
      "limit flag, or reduce the required overlap.";
    root.appendChild(empty);
    return;
  }

  const summary = document.createElement("div");
  summary.className = "match-summary";
  summary.textContent =
    `${response.matches.length} matches · ` +
    `states [${response.selected_states.join(", ")}] · ` +
    `min overlap ${response.params.min_overlap}`;
  root.appendChild(summary);

  const maxOverlap = Math.max(1, response.selected_states.length);
  response.matches.forEach((entry, rank) => {
    root.appendChild(renderEntry(entry, rank, maxOverlap, state));
  });
}
