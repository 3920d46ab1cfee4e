"""Dataset model, config parsing, loading, and validation."""

from pathlib import Path

import numpy as np
import pytest
import yaml

from statescope import (
    AnnotationTrack,
    StateMatrix,
    TokenSequence,
    discover_configs,
    import_text_matrix,
    load_dataset,
    load_state_matrix,
    parse_config,
    save_state_matrix,
    validate_dataset,
)
from statescope import formats
from statescope.errors import (
    ConfigError,
    DuplicateSourceId,
    LengthMismatch,
    MissingFile,
    MissingLabel,
    NonFiniteValue,
    UnknownToken,
    UnsupportedVersion,
)


def write_dataset(
    root: Path,
    num_t: int = 5,
    num_states: int = 3,
    tokens=None,
    config_extra=None,
    track_len=None,
) -> Path:
    """Write a minimal valid dataset; callers poke holes in it."""
    rng = np.random.default_rng(1)
    values = rng.standard_normal((num_t, num_states)).astype(np.float32)
    formats.write_tensor(root / "states.bin", values)
    tokens = tokens if tokens is not None else [f"w{i}" for i in range(num_t)]
    formats.write_token_lines(root / "words.txt", tokens)
    formats.write_token_lines(root / "vocab.txt", sorted(set(tokens)))
    ids = np.arange(track_len if track_len is not None else num_t, dtype=np.int32)
    ids %= 2
    formats.write_tensor(root / "track.bin", ids[:, None])
    formats.write_labels(root / "track_labels.txt", {0: "even", 1: "odd"})
    config = {
        "name": "demo",
        "description": "test fixture",
        "states": [{"source_id": "layer0", "file": "states.bin"}],
        "words": "words.txt",
        "dict": "vocab.txt",
        "annotations": [
            {"name": "parity", "file": "track.bin", "labels": "track_labels.txt"}
        ],
    }
    if config_extra:
        config.update(config_extra)
    path = root / "config.yaml"
    path.write_text(yaml.safe_dump(config, sort_keys=False), encoding="utf-8")
    return path


class TestStateMatrix:
    def test_valid(self):
        m = StateMatrix(source_id="a", values=np.zeros((100, 20), dtype=np.float32))
        assert (m.num_timesteps, m.num_states) == (100, 20)

    def test_casts_to_float32(self):
        m = StateMatrix(source_id="a", values=np.zeros((2, 2), dtype=np.float64))
        assert m.values.dtype == np.float32

    def test_rejects_nan(self):
        bad = np.array([[0.0, np.nan]], dtype=np.float32)
        with pytest.raises(NonFiniteValue):
            StateMatrix(source_id="a", values=bad)

    def test_rejects_inf(self):
        bad = np.array([[np.inf]], dtype=np.float32)
        with pytest.raises(NonFiniteValue):
            StateMatrix(source_id="a", values=bad)

    def test_rejects_wrong_rank(self):
        with pytest.raises(LengthMismatch):
            StateMatrix(source_id="a", values=np.zeros(4, dtype=np.float32))

    def test_rejects_empty(self):
        with pytest.raises(LengthMismatch):
            StateMatrix(source_id="a", values=np.zeros((0, 3), dtype=np.float32))

    def test_values_are_read_only(self):
        m = StateMatrix(source_id="a", values=np.zeros((2, 2), dtype=np.float32))
        with pytest.raises(ValueError):
            m.values[0, 0] = 1.0


class TestTokenSequence:
    def test_resolves_all_tokens(self):
        seq = TokenSequence(tokens=("a", "b", "a"), vocabulary=("a", "b"))
        assert len(seq) == 3
        assert seq.token_id("b") == 1

    def test_unknown_token(self):
        with pytest.raises(UnknownToken):
            TokenSequence(tokens=("a", "z"), vocabulary=("a", "b"))

    def test_duplicate_vocabulary(self):
        with pytest.raises(ConfigError):
            TokenSequence(tokens=("a",), vocabulary=("a", "a"))


class TestAnnotationTrack:
    def test_categorical_needs_all_labels(self):
        with pytest.raises(MissingLabel):
            AnnotationTrack(
                name="t",
                ids=np.array([0, 1, 2], dtype=np.int32),
                labels={0: "x", 1: "y"},
                kind="categorical",
            )

    def test_scalar_needs_no_labels(self):
        track = AnnotationTrack(
            name="t", ids=np.array([5, 6], dtype=np.int32), labels={}, kind="scalar"
        )
        assert len(track) == 2

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            AnnotationTrack(
                name="t", ids=np.array([0], dtype=np.int32), labels={}, kind="weird"
            )


class TestParseConfig:
    def test_valid_with_warnings_for_unknown_keys(self, tmp_path):
        path = write_dataset(tmp_path, config_extra={"color": "blue"})
        config = parse_config(path)
        assert config.name == "demo"
        assert any("color" in w for w in config.warnings)

    def test_missing_name(self, tmp_path):
        path = write_dataset(tmp_path)
        raw = yaml.safe_load(path.read_text())
        del raw["name"]
        path.write_text(yaml.safe_dump(raw))
        with pytest.raises(ConfigError):
            parse_config(path)

    def test_duplicate_source_id(self, tmp_path):
        path = write_dataset(
            tmp_path,
            config_extra={
                "states": [
                    {"source_id": "layer0", "file": "states.bin"},
                    {"source_id": "layer0", "file": "states.bin"},
                ]
            },
        )
        with pytest.raises(DuplicateSourceId):
            parse_config(path)

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(MissingFile):
            parse_config(tmp_path / "absent.yaml")

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("states: [unclosed", encoding="utf-8")
        with pytest.raises(ConfigError):
            parse_config(path)

    def test_labels_optional(self, tmp_path):
        path = write_dataset(
            tmp_path,
            config_extra={"annotations": [{"name": "parity", "file": "track.bin"}]},
        )
        config = parse_config(path)
        assert config.annotations[0].labels_path is None


class TestLoadDataset:
    def test_valid_load(self, tmp_path):
        ds = load_dataset(write_dataset(tmp_path, num_t=100, num_states=20))
        assert ds.num_timesteps == 100
        assert ds.states["layer0"].num_states == 20
        assert ds.tracks["parity"].kind == "categorical"

    def test_token_length_mismatch(self, tmp_path):
        path = write_dataset(tmp_path, num_t=100)
        words = formats.read_token_lines(tmp_path / "words.txt")
        formats.write_token_lines(tmp_path / "words.txt", words[:99])
        with pytest.raises(LengthMismatch):
            load_dataset(path)

    def test_track_length_mismatch(self, tmp_path):
        path = write_dataset(tmp_path, num_t=10, track_len=9)
        with pytest.raises(LengthMismatch):
            load_dataset(path)

    def test_missing_state_file(self, tmp_path):
        path = write_dataset(tmp_path)
        (tmp_path / "states.bin").unlink()
        with pytest.raises(MissingFile):
            load_dataset(path)

    def test_nan_in_states(self, tmp_path):
        path = write_dataset(tmp_path, num_t=4, num_states=2)
        bad = np.full((4, 2), np.nan, dtype=np.float32)
        formats.write_tensor(tmp_path / "states.bin", bad)
        with pytest.raises(NonFiniteValue):
            load_dataset(path)

    def test_track_without_labels_is_scalar(self, tmp_path):
        path = write_dataset(
            tmp_path,
            config_extra={"annotations": [{"name": "parity", "file": "track.bin"}]},
        )
        ds = load_dataset(path)
        assert ds.tracks["parity"].kind == "scalar"

    def test_states_must_be_float32_container(self, tmp_path):
        path = write_dataset(tmp_path, num_t=3)
        formats.write_tensor(
            tmp_path / "states.bin", np.zeros((3, 1), dtype=np.int32)
        )
        with pytest.raises(UnsupportedVersion):
            load_dataset(path)


class TestStateMatrixFiles:
    def test_save_load_bitwise(self, tmp_path):
        values = np.array([[0.1, 0.2], [0.3, 0.4], [0.5, 0.6]], dtype=np.float32)
        m = StateMatrix(source_id="m", values=values)
        save_state_matrix(m, tmp_path / "m.bin")
        again = load_state_matrix(tmp_path / "m.bin", source_id="m")
        assert again.values.tobytes() == m.values.tobytes()

    def test_import_text_matrix(self, tmp_path):
        path = tmp_path / "m.txt"
        path.write_text("0.5 -1.0\n2.0 0.0", encoding="utf-8")
        m = import_text_matrix(path, 2, 2)
        assert m.values.tolist() == [[0.5, -1.0], [2.0, 0.0]]


class TestValidation:
    def test_valid_dataset_reports_clean(self, tmp_path):
        report = validate_dataset(write_dataset(tmp_path))
        assert report.ok
        assert report.errors == []

    def test_reports_instead_of_throwing(self, tmp_path):
        path = write_dataset(tmp_path, num_t=100)
        words = formats.read_token_lines(tmp_path / "words.txt")
        formats.write_token_lines(tmp_path / "words.txt", words[:99])
        report = validate_dataset(path)
        assert not report.ok
        assert any("LengthMismatch" in e for e in report.errors)

    def test_collects_multiple_errors(self, tmp_path):
        path = write_dataset(tmp_path)
        (tmp_path / "states.bin").unlink()
        (tmp_path / "track.bin").unlink()
        report = validate_dataset(path)
        assert len(report.errors) >= 2

    def test_soundness_matches_load(self, tmp_path):
        """validate reports zero errors iff load succeeds, over many edits."""
        corruptions = [
            lambda root: None,
            lambda root: (root / "states.bin").unlink(),
            lambda root: (root / "words.txt").unlink(),
            lambda root: formats.write_token_lines(
                root / "words.txt", ["w0", "w1", "w2"]
            ),
            lambda root: formats.write_tensor(
                root / "states.bin", np.full((5, 3), np.inf, dtype=np.float32)
            ),
            lambda root: formats.write_tensor(
                root / "track.bin", np.zeros((4, 1), dtype=np.int32)
            ),
            lambda root: (root / "track_labels.txt").write_text(
                "0\teven\n", encoding="utf-8"
            ),
            lambda root: (root / "states.bin").write_bytes(b"JUNKJUNKJUNK"),
        ]
        for i, corrupt in enumerate(corruptions):
            root = tmp_path / f"case{i}"
            root.mkdir()
            path = write_dataset(root)
            corrupt(root)
            report = validate_dataset(path)
            try:
                load_dataset(path)
                loaded = True
            except Exception:
                loaded = False
            assert report.ok == loaded, f"case {i}: report={report.errors}"


class TestDiscoverConfigs:
    def test_finds_nested_sorted(self, tmp_path):
        (tmp_path / "b").mkdir()
        (tmp_path / "a").mkdir()
        write_dataset(tmp_path / "b")
        write_dataset(tmp_path / "a")
        found = list(discover_configs(tmp_path))
        assert [p.parent.name for p in found] == ["a", "b"]

    def test_missing_root(self, tmp_path):
        with pytest.raises(MissingFile):
            list(discover_configs(tmp_path / "absent"))
