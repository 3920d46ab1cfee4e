/** Wire types for the statescope HTTP API (field names match the JSON). */

export interface SourceInfo {
  source_id: string;
  num_states: number;
}

export interface TrackInfo {
  name: string;
  kind: string;
  labels: Record<string, string> | null;
}

export interface DatasetInfo {
  name: string;
  description: string;
  num_timesteps: number;
  sources: SourceInfo[];
  tracks: TrackInfo[];
}

export interface InvalidConfigInfo {
  path: string;
  error: string;
  detail: string;
}

export interface InfoResponse {
  datasets: DatasetInfo[];
  invalid: InvalidConfigInfo[];
}

export interface TrackWindow {
  name: string;
  kind: string;
  ids: number[];
  labels: string[] | null;
}

export interface ContextResponse {
  dataset: string;
  source_id: string;
  pos: number;
  start: number;
  end: number;
  tokens: string[];
  values: number[][];
  tracks: TrackWindow[];
}

export interface MatchRequest {
  dataset: string;
  source_id: string;
  start: number;
  end: number;
  threshold: number;
  left_limit: boolean;
  right_limit: boolean;
  min_overlap?: number | null;
  top_k?: number;
  max_len?: number | null;
  include_query?: boolean;
  tracks: string[];
}

export interface EffectiveParams {
  source_id: string;
  start: number;
  end: number;
  threshold: number;
  left_limit: boolean;
  right_limit: boolean;
  min_overlap: number;
  top_k: number;
  max_len: number;
  include_query: boolean;
}

export interface MatchEntry {
  start: number;
  end: number;
  length: number;
  states: number[];
  overlap: number;
  union: number;
  per_position_overlap: number[];
  tokens: string[];
  tracks: TrackWindow[];
}

export interface MatchResponse {
  dataset: string;
  params: EffectiveParams;
  selected_states: number[];
  matches: MatchEntry[];
}

export interface SearchResponse {
  dataset: string;
  query: string;
  positions: number[];
  truncated: boolean;
}
