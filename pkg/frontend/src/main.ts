/**
 * App shell: loads the catalog, keeps UiState synced with the URL, renders
 * the select view for the current window, and turns brushes into match
 * queries. All data comes from the HTTP API; the UI only displays it.
 */

import {
  ApiError,
  buildMatchRequest,
  fetchContext,
  fetchInfo,
  postMatch,
} from "./api";
import { renderMatchView } from "./matchView";
import { renderSelectView } from "./selectView";
import type { DatasetInfo, InfoResponse, MatchResponse } from "./types";
import {
  decodeState,
  defaultState,
  encodeState,
  type UiState,
} from "./urlState";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showNotice(messages: string[]): void {
  const box = el<HTMLDivElement>("notice");
  box.textContent = messages.join(" · ");
  box.hidden = messages.length === 0;
}

class App {
  private state: UiState = defaultState();
  private info: InfoResponse = { datasets: [], invalid: [] };
  private lastMatch: MatchResponse | null = null;

  private dataset(): DatasetInfo | undefined {
    return this.info.datasets.find((d) => d.name === this.state.dataset);
  }

  async start(): Promise<void> {
    const decoded = decodeState(window.location.search);
    this.state = decoded.state;
    showNotice(decoded.notices);

    this.info = await fetchInfo();
    if (this.info.datasets.length === 0) {
      showNotice(["no datasets found under the server root"]);
      return;
    }
    if (!this.dataset()) {
      this.state.dataset = this.info.datasets[0].name;
    }
    const ds = this.dataset()!;
    if (!ds.sources.some((s) => s.source_id === this.state.source)) {
      this.state.source = ds.sources[0]?.source_id ?? "";
    }
    this.buildControls();
    this.syncUrl(true);
    await this.refresh();
    window.addEventListener("popstate", () => {
      this.state = decodeState(window.location.search).state;
      this.buildControls();
      void this.refresh();
    });
  }

  private buildControls(): void {
    const ds = this.dataset();
    const datasetSelect = el<HTMLSelectElement>("dataset");
    datasetSelect.replaceChildren(
      ...this.info.datasets.map((d) => new Option(d.name, d.name)),
    );
    datasetSelect.value = this.state.dataset;
    datasetSelect.onchange = () => {
      this.state = defaultState(datasetSelect.value);
      const next = this.dataset();
      this.state.source = next?.sources[0]?.source_id ?? "";
      this.buildControls();
      this.syncUrl();
      void this.refresh();
    };

    const sourceSelect = el<HTMLSelectElement>("source");
    sourceSelect.replaceChildren(
      ...(ds?.sources ?? []).map(
        (s) => new Option(`${s.source_id} (${s.num_states})`, s.source_id),
      ),
    );
    sourceSelect.value = this.state.source;
    sourceSelect.onchange = () => {
      this.state.source = sourceSelect.value;
      this.update();
    };

    const position = el<HTMLInputElement>("position");
    position.value = String(this.state.position);
    position.onchange = () => {
      const value = Number(position.value);
      if (Number.isInteger(value) && value >= 0) this.state.position = value;
      this.update();
    };

    const threshold = el<HTMLInputElement>("threshold");
    threshold.value = String(this.state.threshold);
    threshold.oninput = () => {
      this.state.threshold = Number(threshold.value);
      el<HTMLSpanElement>("threshold-value").textContent = threshold.value;
      this.update();
    };
    el<HTMLSpanElement>("threshold-value").textContent = String(
      this.state.threshold,
    );

    const left = el<HTMLInputElement>("left-limit");
    left.checked = this.state.leftLimit;
    left.onchange = () => {
      this.state.leftLimit = left.checked;
      this.update();
    };
    const right = el<HTMLInputElement>("right-limit");
    right.checked = this.state.rightLimit;
    right.onchange = () => {
      this.state.rightLimit = right.checked;
      this.update();
    };

    el<HTMLButtonElement>("zoom-in").onclick = () => {
      this.state.wordWidth = Math.min(200, this.state.wordWidth + 8);
      this.update(false);
    };
    el<HTMLButtonElement>("zoom-out").onclick = () => {
      this.state.wordWidth = Math.max(8, this.state.wordWidth - 8);
      this.update(false);
    };

    const trackBox = el<HTMLDivElement>("tracks");
    trackBox.replaceChildren();
    for (const track of ds?.tracks ?? []) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = this.state.tracks.includes(track.name);
      box.onchange = () => {
        this.state.tracks = box.checked
          ? [...this.state.tracks, track.name]
          : this.state.tracks.filter((t) => t !== track.name);
        this.syncUrl();
        this.renderMatches();
      };
      label.append(box, ` ${track.name}`);
      trackBox.appendChild(label);
    }

    const map = el<HTMLInputElement>("map-on-words");
    map.checked = this.state.mapOnWords;
    map.onchange = () => {
      this.state.mapOnWords = map.checked;
      this.syncUrl();
      this.renderMatches();
    };
  }

  /** Push state into the URL and refetch; requery matches by default. */
  private update(requery = true): void {
    this.syncUrl();
    void this.refresh(requery);
  }

  private syncUrl(replace = false): void {
    const query = `?${encodeState(this.state)}`;
    if (replace) window.history.replaceState({}, "", query);
    else window.history.pushState({}, "", query);
  }

  private async refresh(requery = true): Promise<void> {
    const ds = this.dataset();
    if (!ds) return;
    try {
      const context = await fetchContext(
        this.state,
        ds.tracks.map((t) => t.name),
      );
      const slider = el<HTMLInputElement>("threshold");
      let low = Infinity;
      let high = -Infinity;
      for (const row of context.values) {
        for (const v of row) {
          if (v < low) low = v;
          if (v > high) high = v;
        }
      }
      if (low < high) {
        slider.min = String(Math.floor(low * 100) / 100);
        slider.max = String(Math.ceil(high * 100) / 100);
        slider.step = "0.01";
      }
      renderSelectView(
        el("select-view"),
        {
          context,
          state: this.state,
          selectedStates: this.lastMatch?.selected_states ?? [],
        },
        { onBrush: (range) => void this.brush(range) },
      );
      if (requery && this.state.selection) {
        await this.query();
      } else {
        this.renderMatches();
      }
    } catch (error) {
      this.report(error);
    }
  }

  private async brush(range: { start: number; end: number }): Promise<void> {
    this.state.selection = range;
    this.syncUrl();
    await this.query();
  }

  private async query(): Promise<void> {
    const ds = this.dataset();
    if (!ds || !this.state.selection) return;
    try {
      // Ask for every track; display filtering happens client-side so
      // toggling a track never re-issues the query.
      this.lastMatch = await postMatch(
        buildMatchRequest(
          this.state,
          this.state.selection,
          ds.tracks.map((t) => t.name),
        ),
      );
      showNotice([]);
    } catch (error) {
      if ((error as Error).name === "AbortError") return;
      this.lastMatch = null;
      this.report(error);
    }
    await this.refresh(false);
  }

  private renderMatches(): void {
    renderMatchView(el("match-view"), this.lastMatch, this.state);
  }

  private report(error: unknown): void {
    const message =
      error instanceof ApiError
        ? `request failed (${error.status}): ${error.message}`
        : `request failed: ${String(error)}`;
    showNotice([message]);
  }
}

if (typeof document !== "undefined" && document.getElementById("select-view")) {
  void new App().start();
}
