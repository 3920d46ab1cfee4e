"""statescope: inspect, select, and match activation patterns in sequence data.

The core objects are a states matrix (timesteps x states), a token sequence
aligned to it, and annotation tracks. A selection turns a token range plus a
threshold into the set of states that are on throughout it; matching ranks
every other range in the corpus by how well its on-set agrees with the
selection.
"""

from .analysis import PatternVector, collect_patterns, format_projection_csv, pca_project
from .dataset import (
    AnnotationTrack,
    Dataset,
    DatasetConfig,
    StateMatrix,
    TokenSequence,
    ValidationReport,
    discover_configs,
    import_text_matrix,
    load_dataset,
    load_state_matrix,
    parse_config,
    save_state_matrix,
    validate_dataset,
)
from .engine import (
    DEFAULT_TOP_K,
    MatchParams,
    MatchResult,
    SelectionSpec,
    StateSet,
    candidate_ranges,
    match_heatmap,
    on_count,
    rank_matches,
    search_phrase,
    select_states,
    state_runs,
)
from .errors import StatescopeError
from .synth import ParenCorpus, build_paren_dataset, gen_paren, level_of, oracle_states, write_paren_dataset

__version__ = "0.1.0"

__all__ = [
    "AnnotationTrack",
    "Dataset",
    "DatasetConfig",
    "DEFAULT_TOP_K",
    "MatchParams",
    "MatchResult",
    "ParenCorpus",
    "PatternVector",
    "SelectionSpec",
    "StateMatrix",
    "StateSet",
    "StatescopeError",
    "TokenSequence",
    "ValidationReport",
    "build_paren_dataset",
    "candidate_ranges",
    "collect_patterns",
    "discover_configs",
    "format_projection_csv",
    "gen_paren",
    "import_text_matrix",
    "level_of",
    "load_dataset",
    "load_state_matrix",
    "match_heatmap",
    "on_count",
    "oracle_states",
    "parse_config",
    "pca_project",
    "rank_matches",
    "save_state_matrix",
    "search_phrase",
    "select_states",
    "state_runs",
    "validate_dataset",
    "write_paren_dataset",
]
