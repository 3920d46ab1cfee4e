"""Dataset model: aligned state matrices, tokens, annotation tracks.

A dataset is described by a YAML config file:

    name: parens
    description: synthetic counting language
    states:
      - source_id: layer0
        file: states_layer0.bin
    words: words.txt
    dict: vocab.txt
    annotations:
      - name: level
        file: level.bin
        labels: level_labels.txt

Paths are resolved relative to the config file. Every aligned series must
share the same number of timesteps T. Datasets are immutable after load and
safe to share across query workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np
import yaml

from . import formats
from .errors import (
    ConfigError,
    DuplicateSourceId,
    LengthMismatch,
    MissingFile,
    MissingLabel,
    NonFiniteValue,
    StatescopeError,
    UnknownToken,
    UnsupportedVersion,
)


@dataclass(frozen=True)
class StateMatrix:
    """One T x D hidden-state time series (float32, row-major by timestep)."""

    source_id: str
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 2:
            raise LengthMismatch(
                f"state matrix {self.source_id!r} must be 2-D, got shape {vals.shape}"
            )
        if vals.shape[0] < 1 or vals.shape[1] < 1:
            raise LengthMismatch(
                f"state matrix {self.source_id!r} has impossible shape {vals.shape}"
            )
        if vals.dtype != np.float32:
            vals = vals.astype(np.float32)
        if not np.isfinite(vals).all():
            raise NonFiniteValue(
                f"state matrix {self.source_id!r} contains NaN or Inf values"
            )
        vals = np.ascontiguousarray(vals)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def num_timesteps(self) -> int:
        return self.values.shape[0]

    @property
    def num_states(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class TokenSequence:
    """The discrete input sequence plus its id<->string vocabulary."""

    tokens: tuple[str, ...]
    vocabulary: tuple[str, ...]
    index: dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "vocabulary", tuple(self.vocabulary))
        index = {tok: i for i, tok in enumerate(self.vocabulary)}
        if len(index) != len(self.vocabulary):
            raise ConfigError("vocabulary entries are not unique")
        object.__setattr__(self, "index", index)
        for pos, tok in enumerate(self.tokens):
            if tok not in index:
                raise UnknownToken(
                    f"token {tok!r} at position {pos} is not in the vocabulary"
                )

    def __len__(self) -> int:
        return len(self.tokens)

    def token_id(self, token: str) -> int:
        return self.index[token]


@dataclass(frozen=True)
class AnnotationTrack:
    """An integer annotation series aligned to timesteps.

    Categorical tracks carry a complete id -> label map; scalar tracks
    (plain numeric series) have no labels.
    """

    name: str
    ids: np.ndarray
    labels: dict[int, str]
    kind: str  # "categorical" | "scalar"

    def __post_init__(self):
        ids = np.ascontiguousarray(np.asarray(self.ids, dtype=np.int32))
        ids.flags.writeable = False
        object.__setattr__(self, "ids", ids)
        if self.kind not in ("categorical", "scalar"):
            raise ConfigError(f"track {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == "categorical":
            present = set(np.unique(self.ids).tolist())
            missing = present - set(self.labels)
            if missing:
                raise MissingLabel(
                    f"track {self.name!r}: ids {sorted(missing)} have no label"
                )

    def __len__(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class Dataset:
    """Everything loaded for one config: states, tokens, tracks."""

    name: str
    description: str
    states: dict[str, StateMatrix]
    tokens: TokenSequence
    tracks: dict[str, AnnotationTrack]

    @property
    def num_timesteps(self) -> int:
        return len(self.tokens)

    def state_matrix(self, source_id: str) -> StateMatrix:
        return self.states[source_id]


@dataclass(frozen=True)
class StateSource:
    source_id: str
    path: Path


@dataclass(frozen=True)
class AnnotationSource:
    name: str
    path: Path
    labels_path: Path | None


@dataclass(frozen=True)
class DatasetConfig:
    name: str
    description: str
    states: tuple[StateSource, ...]
    words: Path
    dict_path: Path
    annotations: tuple[AnnotationSource, ...]
    warnings: tuple[str, ...] = ()


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


_CONFIG_KEYS = {"name", "description", "states", "words", "dict", "annotations"}
_STATE_KEYS = {"source_id", "file"}
_ANNOTATION_KEYS = {"name", "file", "labels"}


def _require_str(mapping: dict, key: str, where: str) -> str:
    value = mapping.get(key)
    if not isinstance(value, str) or not value:
        raise ConfigError(f"{where}: {key!r} must be a non-empty string")
    return value


def parse_config(config_path: str | Path) -> DatasetConfig:
    """Parse and structurally check a dataset config file."""
    config_path = Path(config_path)
    if not config_path.is_file():
        raise MissingFile(f"config file {config_path} does not exist")
    try:
        raw = yaml.safe_load(config_path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{config_path}: invalid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{config_path}: top level must be a mapping")

    warnings = [
        f"unknown config key {key!r}" for key in raw if key not in _CONFIG_KEYS
    ]
    base = config_path.parent
    name = _require_str(raw, "name", str(config_path))
    description = raw.get("description", "")
    if not isinstance(description, str):
        raise ConfigError(f"{config_path}: 'description' must be a string")

    states_raw = raw.get("states")
    if not isinstance(states_raw, list) or not states_raw:
        raise ConfigError(f"{config_path}: 'states' must be a non-empty list")
    sources = []
    seen_ids = set()
    for i, entry in enumerate(states_raw):
        where = f"{config_path}: states[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{where} must be a mapping")
        warnings += [
            f"states[{i}]: unknown key {key!r}" for key in entry if key not in _STATE_KEYS
        ]
        source_id = _require_str(entry, "source_id", where)
        if source_id in seen_ids:
            raise DuplicateSourceId(f"{config_path}: duplicate source_id {source_id!r}")
        seen_ids.add(source_id)
        sources.append(StateSource(source_id, base / _require_str(entry, "file", where)))

    words = base / _require_str(raw, "words", str(config_path))
    dict_path = base / _require_str(raw, "dict", str(config_path))

    annotations = []
    annotations_raw = raw.get("annotations", [])
    if annotations_raw is None:
        annotations_raw = []
    if not isinstance(annotations_raw, list):
        raise ConfigError(f"{config_path}: 'annotations' must be a list")
    seen_names = set()
    for i, entry in enumerate(annotations_raw):
        where = f"{config_path}: annotations[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{where} must be a mapping")
        warnings += [
            f"annotations[{i}]: unknown key {key!r}"
            for key in entry
            if key not in _ANNOTATION_KEYS
        ]
        track_name = _require_str(entry, "name", where)
        if track_name in seen_names:
            raise ConfigError(f"{where}: duplicate annotation name {track_name!r}")
        seen_names.add(track_name)
        labels_path = None
        if entry.get("labels") is not None:
            labels_path = base / _require_str(entry, "labels", where)
        annotations.append(
            AnnotationSource(track_name, base / _require_str(entry, "file", where), labels_path)
        )

    return DatasetConfig(
        name=name,
        description=description,
        states=tuple(sources),
        words=words,
        dict_path=dict_path,
        annotations=tuple(annotations),
        warnings=tuple(warnings),
    )


def save_state_matrix(matrix: StateMatrix, path: str | Path) -> None:
    formats.write_tensor(path, matrix.values)


def load_state_matrix(path: str | Path, source_id: str = "") -> StateMatrix:
    """Load one container file; bitwise inverse of :func:`save_state_matrix`."""
    values = formats.read_tensor(path)
    if values.dtype != np.float32:
        raise UnsupportedVersion(f"{path}: expected a float32 payload, got {values.dtype}")
    return StateMatrix(source_id=source_id or Path(path).stem, values=values)


def import_text_matrix(path: str | Path, rows: int, cols: int, source_id: str = "") -> StateMatrix:
    """Ingest a whitespace-separated decimal text file as a StateMatrix."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"text matrix file {path} does not exist")
    values = formats.parse_text_matrix(path.read_text(encoding="utf-8"), rows, cols)
    return StateMatrix(source_id=source_id or path.stem, values=values)


def _load_track(source: AnnotationSource) -> AnnotationTrack:
    if not source.path.is_file():
        raise MissingFile(f"annotation file {source.path} does not exist")
    values = formats.read_tensor(source.path)
    if values.dtype != np.int32:
        raise UnsupportedVersion(
            f"{source.path}: expected an int32 payload, got {values.dtype}"
        )
    if values.shape[1] != 1:
        raise LengthMismatch(
            f"{source.path}: annotation tracks must have one column, got {values.shape[1]}"
        )
    if source.labels_path is not None:
        if not source.labels_path.is_file():
            raise MissingFile(f"labels file {source.labels_path} does not exist")
        labels = formats.read_labels(source.labels_path)
        kind = "categorical"
    else:
        labels = {}
        kind = "scalar"
    return AnnotationTrack(name=source.name, ids=values[:, 0], labels=labels, kind=kind)


def load_dataset(config_path: str | Path) -> Dataset:
    """Load and cross-validate every file referenced by a config.

    Raises the first problem found; use :func:`validate_dataset` to collect
    all of them as a report instead.
    """
    config = parse_config(config_path)

    if not config.dict_path.is_file():
        raise MissingFile(f"vocabulary file {config.dict_path} does not exist")
    vocabulary = formats.read_vocabulary(config.dict_path)
    if not config.words.is_file():
        raise MissingFile(f"words file {config.words} does not exist")
    words = formats.read_token_lines(config.words)
    tokens = TokenSequence(tokens=tuple(words), vocabulary=tuple(vocabulary))

    states: dict[str, StateMatrix] = {}
    for source in config.states:
        if not source.path.is_file():
            raise MissingFile(f"state file {source.path} does not exist")
        matrix = load_state_matrix(source.path, source_id=source.source_id)
        if matrix.num_timesteps != len(tokens):
            raise LengthMismatch(
                f"state source {source.source_id!r} has {matrix.num_timesteps} timesteps, "
                f"tokens file has {len(tokens)}"
            )
        states[source.source_id] = matrix

    tracks: dict[str, AnnotationTrack] = {}
    for source in config.annotations:
        track = _load_track(source)
        if len(track) != len(tokens):
            raise LengthMismatch(
                f"annotation track {source.name!r} has {len(track)} timesteps, "
                f"tokens file has {len(tokens)}"
            )
        tracks[source.name] = track

    return Dataset(
        name=config.name,
        description=config.description,
        states=states,
        tokens=tokens,
        tracks=tracks,
    )


def validate_dataset(config_path: str | Path) -> ValidationReport:
    """Check a config without throwing; empty error list iff load succeeds."""
    report = ValidationReport()
    try:
        config = parse_config(config_path)
    except StatescopeError as exc:
        report.errors.append(f"{exc.code}: {exc}")
        return report
    report.warnings.extend(config.warnings)

    expected_t: int | None = None

    def check(loader, describe_length=None):
        nonlocal expected_t
        try:
            loaded = loader()
        except StatescopeError as exc:
            report.errors.append(f"{exc.code}: {exc}")
            return
        if describe_length is None:
            return
        n, what = describe_length(loaded)
        if expected_t is None:
            expected_t = n
        elif n != expected_t:
            report.errors.append(
                f"LengthMismatch: {what} has {n} timesteps, expected {expected_t}"
            )

    vocabulary: list[str] = []

    def load_tokens():
        nonlocal vocabulary
        if not config.dict_path.is_file():
            raise MissingFile(f"vocabulary file {config.dict_path} does not exist")
        vocabulary = formats.read_vocabulary(config.dict_path)
        if not config.words.is_file():
            raise MissingFile(f"words file {config.words} does not exist")
        return TokenSequence(
            tokens=tuple(formats.read_token_lines(config.words)),
            vocabulary=tuple(vocabulary),
        )

    check(load_tokens, lambda seq: (len(seq), "tokens file"))
    for source in config.states:

        def load_source(source=source):
            if not source.path.is_file():
                raise MissingFile(f"state file {source.path} does not exist")
            return load_state_matrix(source.path, source_id=source.source_id)

        check(load_source, lambda m: (m.num_timesteps, f"state source {m.source_id!r}"))
    for annotation in config.annotations:
        check(
            lambda annotation=annotation: _load_track(annotation),
            lambda t: (len(t), f"annotation track {t.name!r}"),
        )

    if not report.errors:
        # Final authoritative pass: validation is sound iff load succeeds.
        try:
            load_dataset(config_path)
        except StatescopeError as exc:  # pragma: no cover - drift guard
            report.errors.append(f"{exc.code}: {exc}")
    return report


def discover_configs(root: str | Path) -> Iterator[Path]:
    """Yield every *.yaml config under a data root, sorted by path."""
    root = Path(root)
    if not root.is_dir():
        raise MissingFile(f"data root {root} is not a directory")
    yield from sorted(root.rglob("*.yaml"))
