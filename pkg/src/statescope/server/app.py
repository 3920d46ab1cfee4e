"""FastAPI application factory.

All endpoints are read-only views over datasets loaded from a data root
(argument, else the STATESCOPE_ROOT environment variable, else the working
directory). Responses are deterministic functions of the request.
"""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..dataset import AnnotationTrack, Dataset
from ..engine import MatchParams, SelectionSpec, rank_matches, search_phrase, select_states
from ..errors import StatescopeError
from .registry import DatasetRegistry
from .schemas import (
    ContextResponse,
    DatasetInfo,
    EffectiveParams,
    InfoResponse,
    InvalidConfigInfo,
    MatchEntry,
    MatchRequest,
    MatchResponse,
    SearchResponse,
    SourceInfo,
    TrackInfo,
    TrackWindow,
)

MAX_WINDOW = 1000
MAX_SEARCH_RESULTS = 100


def _track_window(track: AnnotationTrack, start: int, end: int) -> TrackWindow:
    ids = [int(i) for i in track.ids[start : end + 1]]
    labels = None
    if track.kind == "categorical":
        labels = [track.labels[i] for i in ids]
    return TrackWindow(name=track.name, kind=track.kind, ids=ids, labels=labels)


def create_app(root: Path | str | None = None) -> FastAPI:
    if root is None:
        root = os.environ.get("STATESCOPE_ROOT", ".")
    registry = DatasetRegistry(root)
    app = FastAPI(title="statescope")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(StatescopeError)
    async def _domain_error(_request: Request, exc: StatescopeError) -> JSONResponse:
        return JSONResponse(
            status_code=500, content={"detail": f"{exc.code}: {exc}"}
        )

    def _dataset(name: str) -> Dataset:
        try:
            return registry.get(name)
        except StatescopeError as exc:
            raise HTTPException(500, detail=f"{exc.code}: {exc}") from exc
        except KeyError:
            raise HTTPException(404, detail=f"unknown dataset {name!r}") from None

    def _source(dataset: Dataset, source_id: str):
        try:
            return dataset.states[source_id]
        except KeyError:
            raise HTTPException(404, detail=f"unknown source {source_id!r}") from None

    def _tracks(dataset: Dataset, names: list[str]) -> list[AnnotationTrack]:
        out = []
        for name in names:
            if name not in dataset.tracks:
                raise HTTPException(400, detail=f"unknown track {name!r}")
            out.append(dataset.tracks[name])
        return out

    @app.get("/api/info", response_model=InfoResponse)
    def info() -> InfoResponse:
        try:
            names = registry.names()
            invalid = registry.invalid()
        except StatescopeError as exc:
            raise HTTPException(500, detail=f"{exc.code}: {exc}") from exc
        datasets = []
        for name in names:
            ds = registry.get(name)
            datasets.append(
                DatasetInfo(
                    name=ds.name,
                    description=ds.description,
                    num_timesteps=ds.num_timesteps,
                    sources=[
                        SourceInfo(source_id=sid, num_states=m.num_states)
                        for sid, m in sorted(ds.states.items())
                    ],
                    tracks=[
                        TrackInfo(name=t.name, kind=t.kind, labels=t.labels)
                        for t in (ds.tracks[n] for n in sorted(ds.tracks))
                    ],
                )
            )
        return InfoResponse(
            datasets=datasets,
            invalid=[
                InvalidConfigInfo(path=str(i.path), error=i.error, detail=i.detail)
                for i in invalid
            ],
        )

    @app.get("/api/context", response_model=ContextResponse)
    def context(
        dataset: str,
        source: str,
        pos: int,
        left: int = Query(default=20, ge=0),
        right: int = Query(default=20, ge=0),
        tracks: list[str] = Query(default=[]),
    ) -> ContextResponse:
        ds = _dataset(dataset)
        matrix = _source(ds, source)
        num_t = matrix.num_timesteps
        if not 0 <= pos < num_t:
            raise HTTPException(400, detail=f"pos {pos} outside [0, {num_t - 1}]")
        if left + right + 1 > MAX_WINDOW:
            raise HTTPException(
                400, detail=f"window wider than {MAX_WINDOW} timesteps"
            )
        track_objs = _tracks(ds, tracks)
        start = max(0, pos - left)
        end = min(num_t - 1, pos + right)
        return ContextResponse(
            dataset=ds.name,
            source_id=source,
            pos=pos,
            start=start,
            end=end,
            tokens=list(ds.tokens.tokens[start : end + 1]),
            values=[
                [float(v) for v in row] for row in matrix.values[start : end + 1]
            ],
            tracks=[_track_window(t, start, end) for t in track_objs],
        )

    @app.post("/api/match", response_model=MatchResponse)
    def match(request: MatchRequest) -> MatchResponse:
        ds = _dataset(request.dataset)
        matrix = _source(ds, request.source_id)
        num_t = matrix.num_timesteps
        if not 0 <= request.start <= request.end < num_t:
            raise HTTPException(
                400,
                detail=f"range [{request.start}, {request.end}] outside [0, {num_t - 1}]",
            )
        track_objs = _tracks(ds, request.tracks)
        try:
            spec = SelectionSpec(
                source_id=request.source_id,
                start=request.start,
                end=request.end,
                threshold=request.threshold,
                left_limit=request.left_limit,
                right_limit=request.right_limit,
            )
            params = MatchParams(
                min_overlap=request.min_overlap,
                top_k=request.top_k,
                max_len=request.max_len,
                include_query=request.include_query,
            )
        except ValueError as exc:
            raise HTTPException(400, detail=str(exc)) from exc
        selected = select_states(matrix, spec)
        if not selected:
            raise HTTPException(
                422,
                detail="EmptySelection: no state is on throughout "
                f"[{spec.start}, {spec.end}] at threshold {spec.threshold}",
            )
        results = rank_matches(matrix, selected, spec, params)
        effective = EffectiveParams(
            source_id=spec.source_id,
            start=spec.start,
            end=spec.end,
            threshold=spec.threshold,
            left_limit=spec.left_limit,
            right_limit=spec.right_limit,
            min_overlap=params.resolve_min_overlap(len(selected)),
            top_k=params.top_k,
            max_len=params.resolve_max_len(spec.length),
            include_query=params.include_query,
        )
        entries = []
        for res in results:
            entries.append(
                MatchEntry(
                    start=res.start,
                    end=res.end,
                    length=res.length,
                    states=list(res.s2),
                    overlap=res.overlap,
                    union=res.union,
                    per_position_overlap=list(res.per_position_overlap),
                    tokens=list(ds.tokens.tokens[res.start : res.end + 1]),
                    tracks=[_track_window(t, res.start, res.end) for t in track_objs],
                )
            )
        return MatchResponse(
            dataset=ds.name,
            params=effective,
            selected_states=list(selected),
            matches=entries,
        )

    @app.get("/api/search", response_model=SearchResponse)
    def search(dataset: str, q: str) -> SearchResponse:
        ds = _dataset(dataset)
        phrase = q.split()
        if not phrase:
            raise HTTPException(400, detail="empty query")
        positions = search_phrase(ds.tokens, phrase)
        return SearchResponse(
            dataset=ds.name,
            query=q,
            positions=positions[:MAX_SEARCH_RESULTS],
            truncated=len(positions) > MAX_SEARCH_RESULTS,
        )

    return app
