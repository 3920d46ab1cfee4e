/**
 * Thin client for the statescope HTTP API. The UI never ranks or filters
 * matches itself; everything rendered comes straight from these responses.
 */

import type {
  ContextResponse,
  InfoResponse,
  MatchRequest,
  MatchResponse,
  SearchResponse,
} from "./types";
import type { SelectionRange, UiState } from "./urlState";

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
    this.name = "ApiError";
  }
}

let apiBase = "";

/** Point the client at a different origin (tests, dev server). */
export function setApiBase(base: string): void {
  apiBase = base.replace(/\/$/, "");
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(apiBase + path, init);
  if (!response.ok) {
    let detail = await response.text();
    try {
      const body = JSON.parse(detail);
      if (typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the raw text
    }
    throw new ApiError(detail || response.statusText, response.status);
  }
  return response.json() as Promise<T>;
}

export function fetchInfo(): Promise<InfoResponse> {
  return request<InfoResponse>("/api/info");
}

export function fetchContext(
  state: UiState,
  tracks: string[],
): Promise<ContextResponse> {
  const half = Math.floor((state.window - 1) / 2);
  const params = new URLSearchParams({
    dataset: state.dataset,
    source: state.source,
    pos: String(state.position),
    left: String(half),
    right: String(state.window - 1 - half),
  });
  for (const name of tracks) params.append("tracks", name);
  return request<ContextResponse>(`/api/context?${params}`);
}

/**
 * The brushing contract: a selected token range becomes a match request
 * carrying the current threshold and limit flags verbatim.
 */
export function buildMatchRequest(
  state: UiState,
  range: SelectionRange,
  tracks?: string[],
): MatchRequest {
  return {
    dataset: state.dataset,
    source_id: state.source,
    start: range.start,
    end: range.end,
    threshold: state.threshold,
    left_limit: state.leftLimit,
    right_limit: state.rightLimit,
    tracks: tracks ?? state.tracks,
  };
}

let matchController: AbortController | null = null;

/** POST a match query; a newer query supersedes (aborts) an in-flight one. */
export function postMatch(body: MatchRequest): Promise<MatchResponse> {
  matchController?.abort();
  const controller = new AbortController();
  matchController = controller;
  return request<MatchResponse>("/api/match", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
    signal: controller.signal,
  });
}

export function searchPhrase(
  dataset: string,
  query: string,
): Promise<SearchResponse> {
  const params = new URLSearchParams({ dataset, q: query });
  return request<SearchResponse>(`/api/search?${params}`);
}
