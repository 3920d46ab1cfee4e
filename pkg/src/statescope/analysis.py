"""Pattern-vector analysis: binary on/off fingerprints of ranges and their
PCA projection, used to check whether selection patterns separate classes of
phrases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .dataset import StateMatrix
from .engine import SelectionSpec, select_states
from .errors import TooFewVectors

_JACOBI_TOL = 1e-10
_JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class PatternVector:
    """The on/off fingerprint of one range, with an optional class label."""

    bits: tuple[int, ...]
    label: str | None = None


def collect_patterns(
    states: StateMatrix,
    labeled_ranges: Iterable[tuple[int, int, str | None]],
    threshold: float,
) -> list[PatternVector]:
    """One pattern vector per (start, end, label) range, no boundary limits."""
    out = []
    for start, end, label in labeled_ranges:
        spec = SelectionSpec(
            source_id=states.source_id, start=start, end=end, threshold=threshold
        )
        mask = select_states(states, spec).to_mask(states.num_states)
        out.append(PatternVector(bits=tuple(int(b) for b in mask), label=label))
    return out


def _jacobi_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors-as-columns) sorted by eigenvalue,
    largest first. Deterministic: fixed sweep order, fixed tolerance.
    """
    a = np.array(matrix, dtype=np.float64)
    n = a.shape[0]
    vecs = np.eye(n)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = np.abs(a - np.diag(np.diag(a))).max() if n > 1 else 0.0
        if off <= _JACOBI_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                vec_p, vec_q = vecs[:, p].copy(), vecs[:, q].copy()
                vecs[:, p] = c * vec_p - s * vec_q
                vecs[:, q] = s * vec_p + c * vec_q
    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], vecs[:, order]


def _orient(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        pivot = int(np.argmax(np.abs(out[:, j])))
        if out[pivot, j] < 0:
            out[:, j] = -out[:, j]
    return out


def pca_project(
    vectors: Sequence[PatternVector], k: int = 2
) -> tuple[np.ndarray, np.ndarray]:
    """Project pattern vectors onto the top-k principal components.

    Returns (coordinates, explained-variance ratios). Vectors are
    mean-centered; components are eigenvectors of the sample covariance in
    descending eigenvalue order, each oriented so its largest-magnitude
    entry is positive. Identical inputs are not an error: coordinates and
    ratios are all zero.
    """
    if len(vectors) < 2:
        raise TooFewVectors("need at least 2 vectors for a covariance")
    dims = len(vectors[0].bits)
    data = np.empty((len(vectors), dims), dtype=np.float64)
    for i, vec in enumerate(vectors):
        if len(vec.bits) != dims:
            raise ValueError(
                f"vector {i} has dimension {len(vec.bits)}, expected {dims}"
            )
        data[i] = vec.bits
    if not 1 <= k <= dims:
        raise ValueError(f"k must be in 1..{dims}, got {k}")

    centered = data - data.mean(axis=0)
    cov = centered.T @ centered / (len(vectors) - 1)
    total = float(np.trace(cov))
    if total == 0.0:
        return np.zeros((len(vectors), k)), np.zeros(k)
    values, components = _jacobi_eigh(cov)
    values = np.maximum(values, 0.0)
    components = _orient(components[:, :k])
    coords = centered @ components
    ratios = values[:k] / values.sum()
    return coords, ratios


def format_projection_csv(patterns: Sequence[PatternVector], coords: np.ndarray) -> str:
    """Render label,x1..xk rows for any plotting tool."""
    k = coords.shape[1]
    lines = ["label," + ",".join(f"x{j + 1}" for j in range(k))]
    for pattern, row in zip(patterns, coords):
        label = pattern.label if pattern.label is not None else ""
        lines.append(label + "," + ",".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"
