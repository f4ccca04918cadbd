from pathlib import Path

import pytest


def fmt(x: float) -> str:
    return format(float(x), ".17e")


def write_csv(path: Path, header: list[str], rows: list[list[float]]) -> Path:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def drift_csv(tmp_path):
    """Small rigid-body-shaped drifts table."""
    header = ["time", "hamiltonian"] + [f"eigenvalue_{k:02d}" for k in range(3)]
    rows = [[0.1 * k, 1e-8 * k, 1e-12 * k, 2e-12 * k, 3e-12 * k] for k in range(6)]
    return write_csv(tmp_path / "drifts.csv", header, rows)


@pytest.fixture
def order_csv(tmp_path):
    header = ["h", "max_error"]
    rows = [[0.5**k, 0.1 * 0.25**k] for k in range(6)]
    return write_csv(tmp_path / "order.csv", header, rows)


@pytest.fixture
def states_csv(tmp_path):
    header = ["step", "time"]
    for i in range(3):
        header += [f"w{i}_x", f"w{i}_y", f"w{i}_z"]
    rows = []
    for k in range(8):
        t = 0.1 * k
        row = [k, t]
        for i in range(3):
            row += [0.5 + 0.01 * k + i, 0.1 * i - 0.005 * k, 1.5 + 0.001 * k]
        rows.append(row)
    return write_csv(tmp_path / "states.csv", header, rows)
