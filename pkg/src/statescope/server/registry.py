"""Dataset discovery and caching for the server.

The registry scans a data root once, on first use, and keeps every valid
dataset in memory. Datasets are immutable, so concurrent readers share them
without locking beyond the initial scan.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path

from ..dataset import Dataset, discover_configs, load_dataset
from ..errors import StatescopeError


@dataclass(frozen=True)
class InvalidConfig:
    path: Path
    error: str
    detail: str


class DatasetRegistry:
    """Loads every *.yaml config under a root directory, keyed by name."""

    def __init__(self, root: Path | str):
        self._root = Path(root)
        self._lock = threading.Lock()
        self._datasets: dict[str, Dataset] | None = None
        self._invalid: list[InvalidConfig] = []

    @property
    def root(self) -> Path:
        return self._root

    def _scan(self) -> None:
        datasets: dict[str, Dataset] = {}
        invalid: list[InvalidConfig] = []
        for config_path in discover_configs(self._root):
            try:
                dataset = load_dataset(config_path)
            except StatescopeError as exc:
                invalid.append(InvalidConfig(config_path, exc.code, str(exc)))
                continue
            if dataset.name in datasets:
                invalid.append(
                    InvalidConfig(
                        config_path,
                        "ConfigError",
                        f"duplicate dataset name {dataset.name!r}",
                    )
                )
                continue
            datasets[dataset.name] = dataset
        self._datasets = datasets
        self._invalid = invalid

    def _ensure(self) -> dict[str, Dataset]:
        with self._lock:
            if self._datasets is None:
                self._scan()
            assert self._datasets is not None
            return self._datasets

    def names(self) -> list[str]:
        return sorted(self._ensure())

    def invalid(self) -> list[InvalidConfig]:
        self._ensure()
        return list(self._invalid)

    def get(self, name: str) -> Dataset:
        """KeyError if the dataset does not exist."""
        return self._ensure()[name]
