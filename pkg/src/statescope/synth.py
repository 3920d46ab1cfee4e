"""Synthetic counting-language corpus with oracle hidden states.

The language has alphabet ( ) 0 1 2 3 4. Opening parentheses raise the
nesting level, closing ones lower it, digits repeat the current level, and
nesting is capped at 4. The oracle state matrix encodes the level with four
indicator states (state c is +1 exactly when level >= c+1) plus seeded
noise states that always stay below a 0.5 threshold, so selection and
matching behavior can be verified end to end without a trained model.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import formats
from .dataset import AnnotationTrack, StateMatrix, TokenSequence
from .errors import DTooSmall, UnbalancedSequence

ALPHABET = ("(", ")", "0", "1", "2", "3", "4")
MAX_LEVEL = 4

OPEN_WEIGHT = 0.25
CLOSE_WEIGHT = 0.25


@dataclass(frozen=True)
class ParenCorpus:
    tokens: TokenSequence
    levels: AnnotationTrack


def gen_paren(seed: int, length: int) -> ParenCorpus:
    """Generate a balanced corpus of exactly ``length`` tokens.

    At each step "(" and ")" are proposed with weight 0.25 where legal and a
    digit naming the current level takes the rest; choices that could not be
    closed before the end are masked out, which forces the tail to return to
    level 0.
    """
    if length < 2:
        raise ValueError("length must be >= 2")
    rng = random.Random(seed)
    tokens: list[str] = []
    levels: list[int] = []
    level = 0
    for step in range(length):
        remaining = length - step
        w_open = OPEN_WEIGHT if level < MAX_LEVEL and remaining >= level + 2 else 0.0
        w_close = CLOSE_WEIGHT if level > 0 else 0.0
        w_digit = 1.0 - (OPEN_WEIGHT if level < MAX_LEVEL else 0.0) - w_close
        if remaining < level + 1:
            w_digit = 0.0
        draw = rng.random() * (w_open + w_close + w_digit)
        if draw < w_open:
            level += 1
            tokens.append("(")
        elif draw < w_open + w_close:
            level -= 1
            tokens.append(")")
        else:
            tokens.append(str(level))
        levels.append(level)
    assert level == 0, "generator must close every parenthesis"
    return ParenCorpus(
        tokens=TokenSequence(tokens=tuple(tokens), vocabulary=ALPHABET),
        levels=AnnotationTrack(
            name="level",
            ids=np.array(levels, dtype=np.int32),
            labels={i: str(i) for i in range(MAX_LEVEL + 1)},
            kind="categorical",
        ),
    )


def level_of(tokens) -> list[int]:
    """Nesting level after reading each token; starts from level 0."""
    levels: list[int] = []
    level = 0
    for pos, token in enumerate(tokens):
        if token == "(":
            level += 1
        elif token == ")":
            level -= 1
        elif token not in ALPHABET:
            raise ValueError(f"token {token!r} at position {pos} is not in the alphabet")
        if not 0 <= level <= MAX_LEVEL:
            raise UnbalancedSequence(
                f"level {level} at position {pos} leaves the allowed 0..{MAX_LEVEL} band"
            )
        levels.append(level)
    return levels


def oracle_states(levels, dims: int, seed: int) -> StateMatrix:
    """Deterministic state matrix whose first four states indicate the level.

    States 0..3 hold +1.0 where level >= c+1 and -1.0 elsewhere; the
    remaining states are noise inside (-0.5, 0.5), so with a threshold of
    0.5 the indicators are the only states that can ever be on.
    """
    if dims < MAX_LEVEL + 1:
        raise DTooSmall(f"need at least {MAX_LEVEL + 1} states, got {dims}")
    level_arr = np.asarray(levels, dtype=np.int32)
    values = np.empty((level_arr.shape[0], dims), dtype=np.float32)
    for c in range(MAX_LEVEL):
        values[:, c] = np.where(level_arr >= c + 1, 1.0, -1.0)
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-0.5, 0.5, size=(level_arr.shape[0], dims - MAX_LEVEL))
    noise = noise.astype(np.float32)
    # float32 rounding may land exactly on +/-0.5; keep strictly inside.
    bound = np.nextafter(np.float32(0.5), np.float32(0.0))
    values[:, MAX_LEVEL:] = np.clip(noise, -bound, bound)
    return StateMatrix(source_id="oracle", values=values)


def build_paren_dataset(seed: int, length: int, dims: int) -> tuple[ParenCorpus, StateMatrix]:
    corpus = gen_paren(seed, length)
    states = oracle_states(corpus.levels.ids, dims, seed)
    return corpus, states


def write_paren_dataset(
    corpus: ParenCorpus,
    states: StateMatrix,
    out_dir: str | Path,
    name: str = "parens",
) -> Path:
    """Write the corpus as a regular on-disk dataset; returns the config path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    formats.write_tensor(out / "states_oracle.bin", states.values)
    formats.write_token_lines(out / "words.txt", list(corpus.tokens.tokens))
    formats.write_token_lines(out / "vocab.txt", list(corpus.tokens.vocabulary))
    formats.write_tensor(out / "level.bin", corpus.levels.ids[:, None])
    formats.write_labels(out / "level_labels.txt", corpus.levels.labels)
    config = {
        "name": name,
        "description": "synthetic counting language with oracle level-indicator states",
        "states": [{"source_id": states.source_id, "file": "states_oracle.bin"}],
        "words": "words.txt",
        "dict": "vocab.txt",
        "annotations": [
            {"name": "level", "file": "level.bin", "labels": "level_labels.txt"}
        ],
    }
    config_path = out / "config.yaml"
    config_path.write_text(yaml.safe_dump(config, sort_keys=False), encoding="utf-8")
    return config_path
