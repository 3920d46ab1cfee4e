"""Command-line entry points.

Subcommands are thin wrappers over the library: ingest and validate handle
files, gen-paren writes a synthetic dataset, match and pca run offline
queries, serve starts the HTTP service. Exit code 0 on success, 1 with a
message on stderr for any domain error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import collect_patterns, format_projection_csv, pca_project
from .dataset import import_text_matrix, load_dataset, save_state_matrix, validate_dataset
from .engine import MatchParams, SelectionSpec, rank_matches, select_states
from .errors import StatescopeError
from .synth import build_paren_dataset, write_paren_dataset


def _parse_min_overlap(text: str) -> int | float:
    try:
        return int(text)
    except ValueError:
        return float(text)


def _cmd_ingest(args: argparse.Namespace) -> int:
    matrix = import_text_matrix(
        Path(args.input), args.rows, args.cols, source_id=args.source_id
    )
    save_state_matrix(matrix, Path(args.out))
    print(f"wrote {args.out} ({matrix.num_timesteps} x {matrix.num_states})")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    report = validate_dataset(Path(args.config))
    for warning in report.warnings:
        print(f"warning: {warning}")
    for error in report.errors:
        print(f"error: {error}", file=sys.stderr)
    if report.ok:
        print("ok")
        return 0
    return 1


def _cmd_gen_paren(args: argparse.Namespace) -> int:
    corpus, states = build_paren_dataset(args.seed, args.length, args.dims)
    config = write_paren_dataset(corpus, states, Path(args.out), name=args.name)
    print(f"wrote {config}")
    return 0


def _cmd_match(args: argparse.Namespace) -> int:
    dataset = load_dataset(Path(args.config))
    if args.source not in dataset.states:
        print(f"error: unknown source {args.source!r}", file=sys.stderr)
        return 1
    matrix = dataset.states[args.source]
    spec = SelectionSpec(
        source_id=args.source,
        start=args.start,
        end=args.end,
        threshold=args.threshold,
        left_limit=args.left_limit,
        right_limit=args.right_limit,
    )
    params = MatchParams(
        min_overlap=_parse_min_overlap(args.min_overlap) if args.min_overlap else None,
        top_k=args.top_k,
        max_len=args.max_len,
        include_query=args.include_query,
    )
    s1 = select_states(matrix, spec)
    results = rank_matches(matrix, s1, spec, params)
    print("start\tend\tlength\toverlap\tunion\tstates")
    for res in results:
        states_col = ",".join(str(s) for s in res.s2)
        print(
            f"{res.start}\t{res.end}\t{res.length}\t{res.overlap}"
            f"\t{res.union}\t{states_col}"
        )
    return 0


def _read_ranges(path: Path) -> list[tuple[int, int, str | None]]:
    """Lines of start<TAB>end<TAB>label; the label may be omitted."""
    out: list[tuple[int, int, str | None]] = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        parts = line.split("\t")
        label = parts[2] if len(parts) > 2 else None
        out.append((int(parts[0]), int(parts[1]), label))
    return out


def _cmd_pca(args: argparse.Namespace) -> int:
    dataset = load_dataset(Path(args.config))
    if args.source not in dataset.states:
        print(f"error: unknown source {args.source!r}", file=sys.stderr)
        return 1
    ranges = _read_ranges(Path(args.ranges))
    patterns = collect_patterns(dataset.states[args.source], ranges, args.threshold)
    coords, _ratios = pca_project(patterns, k=args.components)
    csv_text = format_projection_csv(patterns, coords)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(csv_text)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(args.root)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statescope",
        description="Inspect and match activation patterns in sequence datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="convert a whitespace text matrix to the binary format")
    p.add_argument("input")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--source-id", default="")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("validate", help="check a dataset config and its files")
    p.add_argument("config")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("gen-paren", help="generate a synthetic parenthesis dataset")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--dims", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--name", default="parens")
    p.set_defaults(func=_cmd_gen_paren)

    p = sub.add_parser("match", help="rank matches for a selection, output TSV")
    p.add_argument("config")
    p.add_argument("--source", required=True)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--end", type=int, required=True)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--left-limit", action="store_true")
    p.add_argument("--right-limit", action="store_true")
    p.add_argument("--min-overlap", default=None)
    p.add_argument("--top-k", type=int, default=50)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--include-query", action="store_true")
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("pca", help="project range patterns onto principal components")
    p.add_argument("config")
    p.add_argument("--source", required=True)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--ranges", required=True, help="TSV file: start, end, optional label")
    p.add_argument("--components", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_pca)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--root", default=None, help="data root (default: $STATESCOPE_ROOT)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StatescopeError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
