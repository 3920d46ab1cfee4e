import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from statescope import StateMatrix, build_paren_dataset, write_paren_dataset


@pytest.fixture(scope="session")
def paren_dir(tmp_path_factory) -> Path:
    """A small on-disk parenthesis dataset shared by server/CLI tests."""
    out = tmp_path_factory.mktemp("paren_data")
    corpus, states = build_paren_dataset(seed=7, length=400, dims=8)
    write_paren_dataset(corpus, states, out)
    return out


@pytest.fixture()
def example_matrix() -> StateMatrix:
    """The two-state, eight-step matching example used across tests."""
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
    return StateMatrix(source_id="demo", values=values)


@pytest.fixture()
def small_matrix() -> StateMatrix:
    """Three states over four steps; selection examples read from this."""
    values = np.array(
        [
            [0.1, 0.7, 0.1],
            [0.9, 0.9, 0.2],
            [0.8, 0.6, 0.3],
            [0.2, 0.7, 0.1],
        ],
        dtype=np.float32,
    )
    return StateMatrix(source_id="tiny", values=values)
