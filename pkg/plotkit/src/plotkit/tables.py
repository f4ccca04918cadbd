"""CSV loading for the experiment artifacts.

Tables are plain comma-separated files with one header row; every payload
cell is numeric.  Loading never recomputes anything about the dynamics.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import EmptyInputError, MissingColumnError


def load_table(path: Path) -> dict[str, np.ndarray]:
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip()
        if not header:
            raise EmptyInputError(path)
        names = header.split(",")
        body = fh.read().strip()
    if not body:
        raise EmptyInputError(path)
    data = np.loadtxt(body.splitlines(), delimiter=",", ndmin=2)
    if data.shape[1] != len(names):
        raise MissingColumnError(path, {"<malformed row width>"})
    return {name: data[:, k] for k, name in enumerate(names)}


def require_columns(table: dict, columns, path: Path) -> None:
    missing = set(columns) - set(table)
    if missing:
        raise MissingColumnError(path, missing)


def columns_matching(table: dict, prefix: str) -> list[str]:
    return sorted(name for name in table if name.startswith(prefix))
