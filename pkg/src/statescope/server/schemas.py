"""Wire models for the HTTP API.

Everything is plain JSON: matrices as row-major arrays of arrays, floats in
their shortest round-trip form. Every response carries the dataset name and
the effective parameters of the query so a client can reproduce it.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class SourceInfo(BaseModel):
    source_id: str
    num_states: int


class TrackInfo(BaseModel):
    name: str
    kind: str
    labels: dict[int, str] | None = None


class DatasetInfo(BaseModel):
    name: str
    description: str
    num_timesteps: int
    sources: list[SourceInfo]
    tracks: list[TrackInfo]


class InvalidConfigInfo(BaseModel):
    path: str
    error: str
    detail: str


class InfoResponse(BaseModel):
    datasets: list[DatasetInfo]
    invalid: list[InvalidConfigInfo]


class TrackWindow(BaseModel):
    name: str
    kind: str
    ids: list[int]
    labels: list[str] | None = None


class ContextResponse(BaseModel):
    dataset: str
    source_id: str
    pos: int
    start: int
    end: int
    tokens: list[str]
    values: list[list[float]]
    tracks: list[TrackWindow]


class MatchRequest(BaseModel):
    dataset: str
    source_id: str
    start: int
    end: int
    threshold: float
    left_limit: bool = False
    right_limit: bool = False
    min_overlap: int | float | None = None
    top_k: int = Field(default=50, ge=1)
    max_len: int | None = Field(default=None, ge=1)
    include_query: bool = False
    tracks: list[str] = Field(default_factory=list)


class EffectiveParams(BaseModel):
    source_id: str
    start: int
    end: int
    threshold: float
    left_limit: bool
    right_limit: bool
    min_overlap: int
    top_k: int
    max_len: int
    include_query: bool


class MatchEntry(BaseModel):
    start: int
    end: int
    length: int
    states: list[int]
    overlap: int
    union: int
    per_position_overlap: list[int]
    tokens: list[str]
    tracks: list[TrackWindow]


class MatchResponse(BaseModel):
    dataset: str
    params: EffectiveParams
    selected_states: list[int]
    matches: list[MatchEntry]


class SearchResponse(BaseModel):
    dataset: str
    query: str
    positions: list[int]
    truncated: bool
