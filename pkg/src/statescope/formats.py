"""Bit-exact file formats for aligned time-series data.

Binary tensor container (little-endian throughout):

    offset  size  field
    0       4     magic  b"LSTV"
    4       4     version u32, currently 1
    8       8     rows (timesteps) u64
    16      8     cols (states) u64
    24      1     dtype code u8: 1 = float32, 2 = int32
    25      7     reserved, must be zero
    32      ...   rows*cols values, row-major

Text sidecars: token files are UTF-8 with one token per line; vocabulary
files map line number -> token; label files hold "id<TAB>label" lines.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import (
    BadMagic,
    CountMismatch,
    InvalidHeader,
    IoFailure,
    ParseError,
    TruncatedFile,
    UnsupportedVersion,
)

MAGIC = b"LSTV"
VERSION = 1
_HEADER = struct.Struct("<4sIQQB7x")

DTYPE_FLOAT32 = 1
DTYPE_INT32 = 2

_CODE_TO_DTYPE = {DTYPE_FLOAT32: np.dtype("<f4"), DTYPE_INT32: np.dtype("<i4")}
_KIND_TO_CODE = {"f": DTYPE_FLOAT32, "i": DTYPE_INT32}


def write_tensor(path: str | Path, values: np.ndarray) -> None:
    """Write a 2-D float32 or int32 array to the binary container."""
    if values.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {values.shape}")
    code = _KIND_TO_CODE.get(values.dtype.kind)
    if code is None:
        raise ValueError(f"unsupported dtype {values.dtype}")
    rows, cols = values.shape
    payload = np.ascontiguousarray(values, dtype=_CODE_TO_DTYPE[code])
    try:
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, VERSION, rows, cols, code))
            fh.write(payload.tobytes(order="C"))
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_tensor(path: str | Path) -> np.ndarray:
    """Read a container file back into a read-only 2-D array.

    The returned array is bitwise identical to what was written.
    """
    try:
        with open(path, "rb") as fh:
            header = fh.read(_HEADER.size)
            if len(header) < len(MAGIC):
                raise TruncatedFile(f"{path}: file shorter than the magic bytes")
            if header[: len(MAGIC)] != MAGIC:
                raise BadMagic(f"{path}: bad magic {header[:len(MAGIC)]!r}")
            if len(header) < _HEADER.size:
                raise TruncatedFile(f"{path}: incomplete header ({len(header)} bytes)")
            _, version, rows, cols, code = _HEADER.unpack(header)
            if version != VERSION:
                raise UnsupportedVersion(f"{path}: version {version}, expected {VERSION}")
            if code not in _CODE_TO_DTYPE:
                raise UnsupportedVersion(f"{path}: unknown dtype code {code}")
            if header[25:32] != b"\x00" * 7:
                raise InvalidHeader(f"{path}: reserved header bytes are not zero")
            if rows < 1 or cols < 1:
                raise InvalidHeader(f"{path}: impossible shape {rows}x{cols}")
            dtype = _CODE_TO_DTYPE[code]
            expected = rows * cols * dtype.itemsize
            payload = fh.read(expected)
            if len(payload) < expected:
                raise TruncatedFile(
                    f"{path}: payload has {len(payload)} bytes, expected {expected}"
                )
            if fh.read(1):
                raise IoFailure(f"{path}: trailing data after payload")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    values = np.frombuffer(payload, dtype=dtype).reshape(rows, cols)
    return values


def parse_text_matrix(text: str, rows: int, cols: int) -> np.ndarray:
    """Parse whitespace-separated decimals into a float32 (rows, cols) array.

    The count is checked before individual values, so a file with the wrong
    number of fields reports CountMismatch rather than a location.
    """
    fields = text.split()
    if len(fields) != rows * cols:
        raise CountMismatch(
            f"expected {rows * cols} values for a {rows}x{cols} matrix, got {len(fields)}"
        )
    out = np.empty(rows * cols, dtype=np.float64)
    for idx, field in enumerate(fields):
        try:
            out[idx] = float(field)
        except ValueError:
            raise ParseError(
                f"cannot parse {field!r} as a number",
                row=idx // cols + 1,
                col=idx % cols + 1,
            ) from None
    return out.astype(np.float32).reshape(rows, cols)


def read_token_lines(path: str | Path) -> list[str]:
    """Read a one-token-per-line UTF-8 file; trailing newline optional."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if text.endswith("\n"):
        text = text[:-1]
    return text.split("\n") if text else []


def write_token_lines(path: str | Path, tokens: list[str]) -> None:
    body = "\n".join(tokens)
    Path(path).write_text(body + "\n" if tokens else "", encoding="utf-8")


def read_vocabulary(path: str | Path) -> list[str]:
    """Vocabulary file: line number (0-based) is the token id."""
    tokens = read_token_lines(path)
    seen: dict[str, int] = {}
    for row, tok in enumerate(tokens):
        if tok in seen:
            raise ParseError(
                f"duplicate vocabulary entry {tok!r} (first at line {seen[tok] + 1})",
                row=row + 1,
                col=1,
            )
        seen[tok] = row
    return tokens


def read_labels(path: str | Path) -> dict[int, str]:
    """Label file: one "id<TAB>label" pair per line."""
    labels: dict[int, str] = {}
    for row, line in enumerate(read_token_lines(path)):
        if not line:
            continue
        ident, sep, label = line.partition("\t")
        if not sep:
            raise ParseError("expected 'id<TAB>label'", row=row + 1, col=1)
        try:
            key = int(ident)
        except ValueError:
            raise ParseError(
                f"label id {ident!r} is not an integer", row=row + 1, col=1
            ) from None
        if key in labels:
            raise ParseError(f"duplicate label id {key}", row=row + 1, col=1)
        labels[key] = label
    return labels


def write_labels(path: str | Path, labels: dict[int, str]) -> None:
    lines = [f"{key}\t{labels[key]}" for key in sorted(labels)]
    write_token_lines(path, lines)
