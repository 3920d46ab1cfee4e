import { beforeEach, describe, expect, it } from "vitest";

import { renderMatchView } from "../src/matchView";
import type { MatchResponse } from "../src/types";
import { defaultState, type UiState } from "../src/urlState";
import matchFixture from "./fixtures/match.json";

const response = matchFixture as unknown as MatchResponse;

function root(): HTMLElement {
  document.body.innerHTML = '<div id="root"></div>';
  return document.getElementById("root")!;
}

function uiState(tracks: string[] = ["level"]): UiState {
  const state = defaultState(response.dataset);
  state.source = response.params.source_id;
  state.threshold = response.params.threshold;
  state.tracks = tracks;
  return state;
}

describe("match view fidelity", () => {
  let host: HTMLElement;

  beforeEach(() => {
    host = root();
  });

  it("renders the response ranges as rows, in order", () => {
    renderMatchView(host, response, uiState());
    const rows = [...host.querySelectorAll(".match-row")];
    expect(rows).toHaveLength(response.matches.length);
    rows.forEach((row, i) => {
      const el = row as HTMLElement;
      expect(el.dataset.start).toBe(String(response.matches[i].start));
      expect(el.dataset.end).toBe(String(response.matches[i].end));
      expect(el.dataset.rank).toBe(String(i));
    });
  });

  it("passes per_position_overlap through to the count heatmap", () => {
    renderMatchView(host, response, uiState());
    const rows = host.querySelectorAll(".match-row");
    response.matches.forEach((entry, i) => {
      const cells = rows[i].querySelectorAll(
        '.heat-row[data-kind="count"] .heat-cell',
      );
      const values = [...cells].map((cell) =>
        Number((cell as HTMLElement).dataset.value),
      );
      expect(values).toEqual(entry.per_position_overlap);
    });
  });

  it("shows each match's tokens with full text on hover", () => {
    renderMatchView(host, response, uiState());
    const first = host.querySelector(".match-row")!;
    const tokens = first.querySelectorAll(".match-token");
    expect(tokens).toHaveLength(response.matches[0].tokens.length);
    expect((tokens[0] as HTMLElement).title).toBe(
      response.matches[0].tokens[0],
    );
  });

  it("renders a heatmap per active track, with labels as titles", () => {
    renderMatchView(host, response, uiState(["level"]));
    const first = host.querySelector(".match-row")!;
    const track = first.querySelector('.heat-row[data-kind="track:level"]')!;
    const entry = response.matches[0];
    const cells = track.querySelectorAll(".heat-cell");
    expect(cells).toHaveLength(entry.tokens.length);
    const levelTrack = entry.tracks.find((t) => t.name === "level")!;
    expect((cells[0] as HTMLElement).title).toBe(levelTrack.labels![0]);
    expect((cells[0] as HTMLElement).dataset.value).toBe(
      String(levelTrack.ids[0]),
    );
  });

  it("drops a track's heatmap on re-render without a new response", () => {
    renderMatchView(host, response, uiState(["level"]));
    expect(
      host.querySelectorAll('.heat-row[data-kind="track:level"]').length,
    ).toBeGreaterThan(0);
    renderMatchView(host, response, uiState([]));
    expect(
      host.querySelectorAll('.heat-row[data-kind="track:level"]'),
    ).toHaveLength(0);
    expect(host.querySelectorAll(".match-row")).toHaveLength(
      response.matches.length,
    );
  });

  it("links a hovered token to its heatmap cells and back", () => {
    renderMatchView(host, response, uiState());
    const first = host.querySelector(".match-row")!;
    const token = first.querySelectorAll(".match-token")[3] as HTMLElement;
    token.dispatchEvent(new MouseEvent("mouseenter"));
    const linked = first.querySelectorAll('[data-col="3"].linked');
    expect(linked.length).toBeGreaterThanOrEqual(3);
    token.dispatchEvent(new MouseEvent("mouseleave"));
    expect(first.querySelectorAll(".linked")).toHaveLength(0);
  });

  it("paints counts onto word backgrounds only when the toggle is on", () => {
    const state = uiState();
    state.mapOnWords = true;
    renderMatchView(host, response, state);
    const painted = host.querySelector(".match-token") as HTMLElement;
    expect(painted.style.backgroundColor).not.toBe("");

    state.mapOnWords = false;
    renderMatchView(host, response, state);
    const plain = host.querySelector(".match-token") as HTMLElement;
    expect(plain.style.backgroundColor).toBe("");
  });

  it("renders an explicit empty state for zero matches", () => {
    renderMatchView(host, { ...response, matches: [] }, uiState());
    expect(host.querySelector(".empty-state")).not.toBeNull();
    expect(host.querySelectorAll(".match-row")).toHaveLength(0);
  });

  it("shows a hint before any query has run", () => {
    renderMatchView(host, null, uiState());
    expect(host.querySelector(".match-hint")).not.toBeNull();
  });
});
