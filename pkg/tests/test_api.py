"""HTTP layer: endpoint contracts, error codes, engine equivalence."""

import numpy as np
import pytest
import yaml
from fastapi.testclient import TestClient

from statescope import (
    MatchParams,
    SelectionSpec,
    StateMatrix,
    formats,
    rank_matches,
    save_state_matrix,
    select_states,
)
from statescope.server import create_app


@pytest.fixture(scope="module")
def client(paren_dir):
    return TestClient(create_app(paren_dir))


def write_engine_example(root):
    """The two-state ranking example as an on-disk dataset."""
    values = np.array(
        [
            [0.9, 0.9],
            [0.9, 0.9],
            [0.1, 0.1],
            [0.1, 0.1],
            [0.9, 0.9],
            [0.9, 0.1],
            [0.1, 0.1],
            [0.1, 0.1],
        ],
        dtype=np.float32,
    )
    matrix = StateMatrix(source_id="demo", values=values)
    save_state_matrix(matrix, root / "states.bin")
    tokens = ["t0", "t1", "t2", "t3", "t4", "t5", "t6", "t7"]
    formats.write_token_lines(root / "words.txt", tokens)
    formats.write_token_lines(root / "vocab.txt", tokens)
    config = {
        "name": "example",
        "description": "ranking example",
        "states": [{"source_id": "demo", "file": "states.bin"}],
        "words": "words.txt",
        "dict": "vocab.txt",
    }
    (root / "config.yaml").write_text(yaml.safe_dump(config), encoding="utf-8")
    return matrix


class TestInfo:
    def test_catalog_matches_files(self, client):
        data = client.get("/api/info").json()
        assert data["invalid"] == []
        (ds,) = data["datasets"]
        assert ds["name"] == "parens"
        assert ds["num_timesteps"] == 400
        assert ds["sources"] == [{"source_id": "oracle", "num_states": 8}]
        (track,) = ds["tracks"]
        assert track["name"] == "level"
        assert track["kind"] == "categorical"
        assert track["labels"] == {str(i): str(i) for i in range(5)}

    def test_empty_root(self, tmp_path):
        local = TestClient(create_app(tmp_path))
        data = local.get("/api/info").json()
        assert data == {"datasets": [], "invalid": []}

    def test_broken_config_flagged_with_detail(self, tmp_path):
        root = tmp_path
        write_engine_example(root)
        words = formats.read_token_lines(root / "words.txt")
        formats.write_token_lines(root / "words.txt", words[:-1])
        local = TestClient(create_app(root))
        data = local.get("/api/info").json()
        assert data["datasets"] == []
        (bad,) = data["invalid"]
        assert bad["error"] == "LengthMismatch"
        assert "config.yaml" in bad["path"]

    def test_unreadable_root_is_500(self, tmp_path):
        local = TestClient(create_app(tmp_path / "absent"))
        assert local.get("/api/info").status_code == 500


class TestContext:
    def test_window_clipped_at_start(self, client):
        j = client.get(
            "/api/context",
            params={"dataset": "parens", "source": "oracle", "pos": 0, "left": 5, "right": 3},
        ).json()
        assert j["start"] == 0
        assert j["end"] == 3
        assert len(j["tokens"]) == 4

    def test_aligned_lengths(self, client):
        j = client.get(
            "/api/context",
            params={
                "dataset": "parens",
                "source": "oracle",
                "pos": 50,
                "left": 10,
                "right": 10,
                "tracks": ["level"],
            },
        ).json()
        width = j["end"] - j["start"] + 1
        assert width == 21
        assert len(j["tokens"]) == width
        assert len(j["values"]) == width
        assert all(len(row) == 8 for row in j["values"])
        (track,) = j["tracks"]
        assert len(track["ids"]) == width
        assert len(track["labels"]) == width

    def test_unknown_track_is_400_naming_it(self, client):
        r = client.get(
            "/api/context",
            params={"dataset": "parens", "source": "oracle", "pos": 0, "tracks": ["typo"]},
        )
        assert r.status_code == 400
        assert "typo" in r.json()["detail"]

    def test_unknown_dataset_404(self, client):
        r = client.get(
            "/api/context", params={"dataset": "nope", "source": "oracle", "pos": 0}
        )
        assert r.status_code == 404

    def test_unknown_source_404(self, client):
        r = client.get(
            "/api/context", params={"dataset": "parens", "source": "nope", "pos": 0}
        )
        assert r.status_code == 404

    def test_window_size_cap(self, client):
        r = client.get(
            "/api/context",
            params={"dataset": "parens", "source": "oracle", "pos": 50, "left": 500, "right": 500},
        )
        assert r.status_code == 400

    def test_pos_out_of_range_400(self, client):
        r = client.get(
            "/api/context", params={"dataset": "parens", "source": "oracle", "pos": 400}
        )
        assert r.status_code == 400

    def test_values_match_dataset(self, client, paren_dir):
        from statescope import load_dataset

        ds = load_dataset(paren_dir / "config.yaml")
        j = client.get(
            "/api/context",
            params={"dataset": "parens", "source": "oracle", "pos": 7, "left": 2, "right": 2},
        ).json()
        want = ds.states["oracle"].values[5:10]
        got = np.array(j["values"], dtype=np.float32)
        assert np.array_equal(got, want)


class TestMatch:
    BODY = {
        "dataset": "parens",
        "source_id": "oracle",
        "start": 10,
        "end": 12,
        "threshold": 0.5,
        "tracks": ["level"],
    }

    def test_equals_engine_result(self, client, paren_dir):
        from statescope import load_dataset

        j = client.post("/api/match", json=self.BODY).json()
        ds = load_dataset(paren_dir / "config.yaml")
        spec = SelectionSpec(
            source_id="oracle", start=10, end=12, threshold=0.5
        )
        s1 = select_states(ds.states["oracle"], spec)
        want = rank_matches(ds.states["oracle"], s1, spec, MatchParams())
        assert j["selected_states"] == list(s1)
        assert len(j["matches"]) == len(want)
        for got, res in zip(j["matches"], want):
            assert (got["start"], got["end"]) == (res.start, res.end)
            assert got["states"] == list(res.s2)
            assert got["overlap"] == res.overlap
            assert got["union"] == res.union
            assert got["per_position_overlap"] == list(res.per_position_overlap)

    def test_engine_example_over_http(self, tmp_path):
        write_engine_example(tmp_path)
        local = TestClient(create_app(tmp_path))
        body = {
            "dataset": "example",
            "source_id": "demo",
            "start": 0,
            "end": 1,
            "threshold": 0.5,
            "min_overlap": 1,
        }
        j = local.post("/api/match", json=body).json()
        ranges = [(m["start"], m["end"]) for m in j["matches"]]
        assert ranges[:2] == [(4, 4), (5, 5)]
        assert j["matches"][0]["overlap"] == 2
        assert j["matches"][0]["union"] == 2

    def test_echoes_effective_params(self, client):
        j = client.post("/api/match", json=self.BODY).json()
        params = j["params"]
        assert params["min_overlap"] == 2  # ceil(|S1|=3 / 2)
        assert params["max_len"] == 2 * 3 + 10
        assert params["top_k"] == 50
        assert params["include_query"] is False
        assert params["threshold"] == 0.5
        assert j["dataset"] == "parens"

    def test_tokens_and_tracks_attached(self, client, paren_dir):
        from statescope import load_dataset

        ds = load_dataset(paren_dir / "config.yaml")
        j = client.post("/api/match", json=self.BODY).json()
        for m in j["matches"][:5]:
            width = m["end"] - m["start"] + 1
            assert m["tokens"] == list(ds.tokens.tokens[m["start"] : m["end"] + 1])
            (track,) = m["tracks"]
            assert len(track["ids"]) == width
            assert track["labels"] == [str(i) for i in track["ids"]]

    def test_default_top_k_at_most_50(self, client):
        j = client.post("/api/match", json=self.BODY).json()
        assert len(j["matches"]) <= 50

    def test_stateless_byte_identical(self, client):
        a = client.post("/api/match", json=self.BODY)
        b = client.post("/api/match", json=self.BODY)
        assert a.content == b.content

    def test_threshold_above_max_is_422(self, client):
        r = client.post("/api/match", json={**self.BODY, "threshold": 99.0})
        assert r.status_code == 422
        assert "EmptySelection" in r.json()["detail"]

    def test_unknown_dataset_404(self, client):
        r = client.post("/api/match", json={**self.BODY, "dataset": "nope"})
        assert r.status_code == 404

    def test_bad_range_400(self, client):
        r = client.post("/api/match", json={**self.BODY, "end": 9999})
        assert r.status_code == 400

    def test_limit_flags_forwarded(self, client, paren_dir):
        from statescope import load_dataset

        ds = load_dataset(paren_dir / "config.yaml")
        levels = np.asarray(ds.tracks["level"].ids)
        # a maximal level-1 run bordered by level 0, so the indicator is
        # off just outside and survives both limits
        start = end = None
        for t in np.flatnonzero(levels == 1):
            t = int(t)
            if levels[t - 1] != 0:
                continue
            stop = t
            while stop + 1 < len(levels) and levels[stop + 1] == 1:
                stop += 1
            if stop + 1 < len(levels) and levels[stop + 1] == 0:
                start, end = t, stop
                break
        assert start is not None
        body = {
            **self.BODY,
            "start": start,
            "end": end,
            "left_limit": True,
            "right_limit": True,
        }
        j = client.post("/api/match", json=body).json()
        spec = SelectionSpec(
            source_id="oracle",
            start=start,
            end=end,
            threshold=0.5,
            left_limit=True,
            right_limit=True,
        )
        s1 = select_states(ds.states["oracle"], spec)
        assert len(s1) > 0
        assert j["selected_states"] == list(s1)
        assert j["params"]["left_limit"] is True
        assert j["params"]["right_limit"] is True


class TestSearch:
    def test_positions(self, client, paren_dir):
        from statescope import load_dataset, search_phrase

        ds = load_dataset(paren_dir / "config.yaml")
        j = client.get("/api/search", params={"dataset": "parens", "q": "( )"}).json()
        want = search_phrase(ds.tokens, ["(", ")"])
        assert j["positions"] == want[:100]
        assert j["truncated"] == (len(want) > 100)

    def test_absent_phrase_empty(self, client):
        j = client.get(
            "/api/search", params={"dataset": "parens", "q": "zz zz zz"}
        ).json()
        assert j["positions"] == []

    def test_empty_query_400(self, client):
        assert (
            client.get("/api/search", params={"dataset": "parens", "q": "  "}).status_code
            == 400
        )

    def test_unknown_dataset_404(self, client):
        assert (
            client.get("/api/search", params={"dataset": "x", "q": "("}).status_code
            == 404
        )

    def test_first_100_cap(self, client):
        j = client.get("/api/search", params={"dataset": "parens", "q": "("}).json()
        assert len(j["positions"]) <= 100


class TestCors:
    def test_allow_all_origins(self, client):
        r = client.get("/api/info", headers={"Origin": "http://localhost:5173"})
        assert r.headers.get("access-control-allow-origin") == "*"

    def test_preflight(self, client):
        r = client.options(
            "/api/match",
            headers={
                "Origin": "http://localhost:5173",
                "Access-Control-Request-Method": "POST",
            },
        )
        assert r.status_code == 200
        assert r.headers.get("access-control-allow-origin") == "*"
