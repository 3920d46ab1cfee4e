/**
 * URL State Persistence
 *
 * Every knob of the view lives in UiState and serializes to URL query
 * parameters, so any view can be shared and replayed from its address bar.
 * Fields at their default value are omitted from the URL; decode fills them
 * back in, so decode(encode(s)) reproduces s exactly.
 */

export interface SelectionRange {
  start: number;
  end: number;
}

export interface UiState {
  dataset: string;
  source: string;
  position: number;
  window: number;
  wordWidth: number;
  selection: SelectionRange | null;
  threshold: number;
  leftLimit: boolean;
  rightLimit: boolean;
  tracks: string[];
  mapOnWords: boolean;
}

export const DEFAULT_THRESHOLD = 0.3;
export const DEFAULT_WINDOW = 41;
export const DEFAULT_WORD_WIDTH = 56;

export function defaultState(dataset = ""): UiState {
  return {
    dataset,
    source: "",
    position: 0,
    window: DEFAULT_WINDOW,
    wordWidth: DEFAULT_WORD_WIDTH,
    selection: null,
    threshold: DEFAULT_THRESHOLD,
    leftLimit: false,
    rightLimit: false,
    tracks: [],
    mapOnWords: false,
  };
}

export function encodeState(state: UiState): string {
  const params = new URLSearchParams();
  params.set("ds", state.dataset);
  if (state.source !== "") params.set("src", state.source);
  if (state.position !== 0) params.set("pos", String(state.position));
  if (state.window !== DEFAULT_WINDOW) params.set("win", String(state.window));
  if (state.wordWidth !== DEFAULT_WORD_WIDTH) {
    params.set("ww", String(state.wordWidth));
  }
  if (state.selection !== null) {
    params.set("sel", `${state.selection.start}-${state.selection.end}`);
  }
  if (state.threshold !== DEFAULT_THRESHOLD) {
    params.set("t", String(state.threshold));
  }
  if (state.leftLimit) params.set("ll", "1");
  if (state.rightLimit) params.set("rl", "1");
  if (state.tracks.length > 0) params.set("tr", state.tracks.join(","));
  if (state.mapOnWords) params.set("map", "1");
  return params.toString();
}

export interface DecodeResult {
  state: UiState;
  /** Human-readable complaints about parameters that had to be ignored. */
  notices: string[];
}

function parseIntParam(
  params: URLSearchParams,
  key: string,
  fallback: number,
  minimum: number,
  notices: string[],
): number {
  const raw = params.get(key);
  if (raw === null) return fallback;
  const value = Number(raw);
  if (!Number.isInteger(value) || value < minimum) {
    notices.push(`ignoring ${key}=${raw}: expected an integer >= ${minimum}`);
    return fallback;
  }
  return value;
}

export function decodeState(search: string): DecodeResult {
  const params = new URLSearchParams(search);
  const notices: string[] = [];
  const state = defaultState(params.get("ds") ?? "");
  state.source = params.get("src") ?? "";
  state.position = parseIntParam(params, "pos", 0, 0, notices);
  state.window = parseIntParam(params, "win", DEFAULT_WINDOW, 1, notices);
  state.wordWidth = parseIntParam(
    params, "ww", DEFAULT_WORD_WIDTH, 8, notices,
  );

  const sel = params.get("sel");
  if (sel !== null) {
    const m = /^(\d+)-(\d+)$/.exec(sel);
    if (m && Number(m[1]) <= Number(m[2])) {
      state.selection = { start: Number(m[1]), end: Number(m[2]) };
    } else {
      notices.push(`ignoring sel=${sel}: expected "start-end"`);
    }
  }

  const t = params.get("t");
  if (t !== null) {
    const value = Number(t);
    if (t.trim() !== "" && Number.isFinite(value)) {
      state.threshold = value;
    } else {
      notices.push(
        `ignoring t=${t}: not a number, using ${DEFAULT_THRESHOLD}`,
      );
    }
  }

  state.leftLimit = params.get("ll") === "1";
  state.rightLimit = params.get("rl") === "1";
  const tracks = params.get("tr");
  if (tracks !== null) {
    state.tracks = tracks.split(",").filter((name) => name !== "");
  }
  state.mapOnWords = params.get("map") === "1";
  return { state, notices };
}
