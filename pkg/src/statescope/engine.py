"""Selection and matching over hidden-state time series.

A selection turns a phrase range plus a threshold into the set of states
that are "on" (value >= threshold) throughout the range, optionally
requiring them to be off immediately before/after it. Matching then finds
every other range in the dataset whose own on-state set overlaps the
selection, ranked by overlap size.

Candidate generation never scans all O(T^2) ranges: per-timestep counts of
on selected states are reduced to maximal stretches where at least
``min_overlap`` of them are on, and only sub-ranges of those stretches are
enumerated (any qualifying range must lie inside one). Run ends are taken
from the run-length structure of the on/off signal, so each stretch is
processed with vectorized array passes.

All functions are pure over immutable inputs and safe to call concurrently.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .dataset import StateMatrix, TokenSequence
from .errors import EmptySelection, RangeOutOfBounds

DEFAULT_TOP_K = 50

# Rows per tile when sweeping long sequences; bounds transient allocations.
_TILE = 32768


@dataclass(frozen=True)
class SelectionSpec:
    """A user hypothesis: range [start, end] on one source at a threshold."""

    source_id: str
    start: int
    end: int
    threshold: float
    left_limit: bool = False
    right_limit: bool = False

    def __post_init__(self):
        if not math.isfinite(self.threshold):
            raise ValueError("threshold must be finite")

    @property
    def length(self) -> int:
        return self.end - self.start + 1


@dataclass(frozen=True)
class StateSet:
    """A sorted, duplicate-free subset of state indices."""

    members: tuple[int, ...]

    def __post_init__(self):
        normalized = tuple(sorted({int(i) for i in self.members}))
        if normalized and normalized[0] < 0:
            raise ValueError(f"negative state index {normalized[0]}")
        object.__setattr__(self, "members", normalized)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "StateSet":
        return cls(tuple(np.flatnonzero(mask).tolist()))

    def to_mask(self, num_states: int) -> np.ndarray:
        mask = np.zeros(num_states, dtype=bool)
        mask[list(self.members)] = True
        return mask

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, index: int) -> bool:
        return index in set(self.members)


@dataclass(frozen=True)
class MatchParams:
    """Knobs for candidate filtering and ranking.

    min_overlap: required |S1 ∩ S2|; an int is an absolute count, a float in
        (0, 1] is a fraction of |S1|; None means half of |S1| (at least 1).
    max_len: longest candidate range; None derives 2 * query_length + 10.
    """

    min_overlap: int | float | None = None
    top_k: int = DEFAULT_TOP_K
    max_len: int | None = None
    include_query: bool = False

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.max_len is not None and self.max_len < 1:
            raise ValueError("max_len must be >= 1")
        if self.min_overlap is not None:
            if isinstance(self.min_overlap, bool):
                raise ValueError("min_overlap must be a number")
            if isinstance(self.min_overlap, int):
                if self.min_overlap < 1:
                    raise ValueError("integer min_overlap must be >= 1")
            elif not 0.0 < self.min_overlap <= 1.0:
                raise ValueError("fractional min_overlap must be in (0, 1]")

    def resolve_min_overlap(self, selection_size: int) -> int:
        if self.min_overlap is None:
            return max(1, math.ceil(selection_size / 2))
        if isinstance(self.min_overlap, int):
            return self.min_overlap
        return max(1, math.ceil(self.min_overlap * selection_size))

    def resolve_max_len(self, query_length: int) -> int:
        if self.max_len is not None:
            return self.max_len
        return 2 * query_length + 10


@dataclass(frozen=True)
class MatchResult:
    """One ranked range with its own on-state set and per-position counts."""

    start: int
    end: int
    s2: StateSet
    overlap: int
    union: int
    per_position_overlap: tuple[int, ...]
    length: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "length", self.end - self.start + 1)


def _check_range(start: int, end: int, num_timesteps: int) -> None:
    if not 0 <= start <= end < num_timesteps:
        raise RangeOutOfBounds(
            f"range [{start}, {end}] is not within 0..{num_timesteps - 1}"
        )


def select_states(states: StateMatrix, spec: SelectionSpec) -> StateSet:
    """Induce S1: states on throughout [start, end], honoring limit flags.

    A limit demands the state be off one step outside the range; at a
    sequence boundary there is no such step and the limit is satisfied.
    """
    values = states.values
    _check_range(spec.start, spec.end, values.shape[0])
    on = (values[spec.start : spec.end + 1] >= spec.threshold).all(axis=0)
    if spec.left_limit and spec.start > 0:
        on &= values[spec.start - 1] < spec.threshold
    if spec.right_limit and spec.end < values.shape[0] - 1:
        on &= values[spec.end + 1] < spec.threshold
    return StateSet.from_mask(on)


def on_count(states: StateMatrix, s1: StateSet, threshold: float) -> np.ndarray:
    """Per-timestep count of selected states that are on."""
    values = states.values
    num_t = values.shape[0]
    out = np.zeros(num_t, dtype=np.int32)
    idx = np.fromiter(s1, dtype=np.int64, count=len(s1))
    if idx.size == 0:
        return out
    if idx.size and idx[-1] >= values.shape[1]:
        raise RangeOutOfBounds(f"state index {idx[-1]} out of range")
    for lo in range(0, num_t, _TILE):
        hi = min(lo + _TILE, num_t)
        out[lo:hi] = (values[lo:hi][:, idx] >= threshold).sum(axis=1)
    return out


def _bool_runs(mask: np.ndarray) -> np.ndarray:
    """Maximal runs of True as an (n, 2) array of inclusive [start, end]."""
    if mask.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    flags = mask.astype(np.int8, copy=False)
    step = np.diff(flags)
    starts = np.flatnonzero(step == 1) + 1
    ends = np.flatnonzero(step == -1)
    if flags[0]:
        starts = np.concatenate(([0], starts))
    if flags[-1]:
        ends = np.concatenate((ends, [mask.size - 1]))
    return np.stack([starts, ends], axis=1).astype(np.int64)


def state_runs(states: StateMatrix, state: int, threshold: float) -> list[tuple[int, int]]:
    """Maximal intervals where one state is on, sorted and disjoint."""
    values = states.values
    if not 0 <= state < values.shape[1]:
        raise RangeOutOfBounds(f"state index {state} out of range 0..{values.shape[1] - 1}")
    runs = _bool_runs(values[:, state] >= threshold)
    return [(int(a), int(b)) for a, b in runs]


def _capped_run_ends(on: np.ndarray) -> np.ndarray:
    """For each (t, c) with on[t, c], the last row of its on-run (capped at
    the window end); off cells get t - 1 so they never reach any b >= t."""
    rows = on.shape[0]
    idx = np.arange(rows, dtype=np.int64)[:, None]
    no_false = np.where(on, rows, idx)
    next_false = np.minimum.accumulate(no_false[::-1], axis=0)[::-1]
    return next_false - 1


def _stretch_candidates(
    values: np.ndarray,
    s1_idx: np.ndarray,
    threshold: float,
    min_overlap: int,
    max_len: int,
    stretch_start: int,
    stretch_end: int,
    out_starts: list[np.ndarray],
    out_ends: list[np.ndarray],
) -> None:
    """Emit all qualifying ranges inside one cover stretch, in (a, b) order.

    For a start row a the qualifying ends are exactly a..b_need where b_need
    is the min_overlap-th largest run end among selected states on at a;
    run ends capped at the stretch end are sufficient because a qualifying
    range can never cross it.
    """
    for tile_lo in range(stretch_start, stretch_end + 1, _TILE):
        tile_hi = min(tile_lo + _TILE - 1, stretch_end)
        window_hi = min(tile_hi + max_len - 1, stretch_end)
        on = values[tile_lo : window_hi + 1][:, s1_idx] >= threshold
        run_end = _capped_run_ends(on)
        n_rows = tile_hi - tile_lo + 1
        sorted_ends = np.sort(run_end[:n_rows], axis=1)
        b_need = sorted_ends[:, s1_idx.size - min_overlap]
        a_local = np.arange(n_rows, dtype=np.int64)
        b_hi = np.minimum(b_need, a_local + max_len - 1)
        counts = np.maximum(b_hi - a_local + 1, 0)
        total = int(counts.sum())
        if total == 0:
            continue
        starts = np.repeat(a_local, counts)
        group_first = np.cumsum(counts) - counts
        ends = starts + (np.arange(total, dtype=np.int64) - np.repeat(group_first, counts))
        out_starts.append(starts + tile_lo)
        out_ends.append(ends + tile_lo)


def _enumerate_candidates(
    values: np.ndarray,
    s1_idx: np.ndarray,
    threshold: float,
    min_overlap: int,
    max_len: int,
) -> tuple[np.ndarray, np.ndarray]:
    """All ranges of length <= max_len where at least min_overlap selected
    states are on throughout, as parallel (starts, ends) arrays."""
    if min_overlap > s1_idx.size:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    num_t = values.shape[0]
    cover = np.zeros(num_t, dtype=np.int32)
    for lo in range(0, num_t, _TILE):
        hi = min(lo + _TILE, num_t)
        cover[lo:hi] = (values[lo:hi][:, s1_idx] >= threshold).sum(axis=1)
    out_starts: list[np.ndarray] = []
    out_ends: list[np.ndarray] = []
    for stretch_start, stretch_end in _bool_runs(cover >= min_overlap):
        _stretch_candidates(
            values,
            s1_idx,
            threshold,
            min_overlap,
            max_len,
            int(stretch_start),
            int(stretch_end),
            out_starts,
            out_ends,
        )
    if not out_starts:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(out_starts), np.concatenate(out_ends)


def _selection_indices(s1: StateSet, num_states: int) -> np.ndarray:
    idx = np.fromiter(s1, dtype=np.int64, count=len(s1))
    if idx.size == 0:
        raise EmptySelection("the selection contains no states")
    if idx[-1] >= num_states:
        raise RangeOutOfBounds(f"state index {idx[-1]} out of range 0..{num_states - 1}")
    return idx


def candidate_ranges(
    states: StateMatrix,
    s1: StateSet,
    threshold: float,
    params: MatchParams,
) -> list[tuple[int, int]]:
    """Exact candidate set: every range of length <= max_len on which at
    least min_overlap selected states are on throughout, sorted by (a, b)."""
    if params.max_len is None:
        raise ValueError("candidate_ranges needs an explicit max_len")
    idx = _selection_indices(s1, states.num_states)
    min_overlap = params.resolve_min_overlap(idx.size)
    starts, ends = _enumerate_candidates(
        states.values, idx, threshold, min_overlap, params.max_len
    )
    return list(zip(starts.tolist(), ends.tolist()))


def _candidate_s2_mask(
    values: np.ndarray,
    start: int,
    end: int,
    threshold: float,
    left_limit: bool,
    right_limit: bool,
) -> np.ndarray:
    """S2 membership for one candidate: on throughout, off just outside when
    a limit is set (sequence boundaries satisfy the limit)."""
    on = (values[start : end + 1] >= threshold).all(axis=0)
    if left_limit and start > 0:
        on &= values[start - 1] < threshold
    if right_limit and end < values.shape[0] - 1:
        on &= values[end + 1] < threshold
    return on


def rank_matches(
    states: StateMatrix,
    s1: StateSet,
    spec: SelectionSpec,
    params: MatchParams | None = None,
) -> list[MatchResult]:
    """Rank candidate ranges against the selection.

    Sort key: overlap |S1 ∩ S2| desc, union |S1 ∪ S2| asc, length desc,
    start asc. The sorted list is then thinned greedily so the returned
    ranges are pairwise disjoint, and cut to top_k.
    """
    if params is None:
        params = MatchParams()
    values = states.values
    num_t, num_states = values.shape
    _check_range(spec.start, spec.end, num_t)
    idx = _selection_indices(s1, num_states)
    min_overlap = params.resolve_min_overlap(idx.size)
    max_len = params.resolve_max_len(spec.length)

    starts, ends = _enumerate_candidates(values, idx, spec.threshold, min_overlap, max_len)
    if not params.include_query and starts.size:
        keep = (ends < spec.start) | (starts > spec.end)
        starts, ends = starts[keep], ends[keep]

    s1_mask = np.zeros(num_states, dtype=bool)
    s1_mask[idx] = True
    scored: list[tuple[int, int, int, int, int]] = []
    for a, b in zip(starts.tolist(), ends.tolist()):
        s2_mask = _candidate_s2_mask(
            values, a, b, spec.threshold, spec.left_limit, spec.right_limit
        )
        overlap = int(np.count_nonzero(s2_mask & s1_mask))
        if overlap < min_overlap:
            continue
        union = idx.size + int(np.count_nonzero(s2_mask)) - overlap
        scored.append((-overlap, union, a - b, a, b))
    scored.sort()

    results: list[MatchResult] = []
    accepted_starts: list[int] = []
    accepted_ends: list[int] = []
    for neg_overlap, union, _, a, b in scored:
        pos = bisect_right(accepted_starts, b)
        if pos > 0 and accepted_ends[pos - 1] >= a:
            continue
        accepted_starts.insert(pos, a)
        accepted_ends.insert(pos, b)
        s2_mask = _candidate_s2_mask(
            values, a, b, spec.threshold, spec.left_limit, spec.right_limit
        )
        per_position = (values[a : b + 1][:, idx] >= spec.threshold).sum(axis=1)
        results.append(
            MatchResult(
                start=a,
                end=b,
                s2=StateSet.from_mask(s2_mask),
                overlap=-neg_overlap,
                union=union,
                per_position_overlap=tuple(int(n) for n in per_position),
            )
        )
        if len(results) == params.top_k:
            break
    return results


def match_heatmap(
    states: StateMatrix, s1: StateSet, result: MatchResult, threshold: float
) -> list[int]:
    """Per-position count of selected states that are on inside a match."""
    values = states.values
    _check_range(result.start, result.end, values.shape[0])
    idx = np.fromiter(s1, dtype=np.int64, count=len(s1))
    if idx.size == 0:
        return [0] * (result.end - result.start + 1)
    window = values[result.start : result.end + 1][:, idx] >= threshold
    return [int(n) for n in window.sum(axis=1)]


def search_phrase(tokens: TokenSequence, query: list[str]) -> list[int]:
    """Start positions of every exact occurrence of the token phrase."""
    if not query:
        raise ValueError("query must contain at least one token")
    seq = tokens.tokens
    n = len(query)
    first = query[0]
    tail = tuple(query[1:])
    return [
        t
        for t in range(len(seq) - n + 1)
        if seq[t] == first and seq[t + 1 : t + n] == tail
    ]
