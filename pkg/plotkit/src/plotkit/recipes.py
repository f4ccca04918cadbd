"""Figure recipes: which CSVs feed which panel layout.

A recipe only names inputs and styling; all numbers come from the CSV
artifacts written by the isoflow CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

FIGURE_IDS = tuple(range(1, 8))

# columns each figure needs in its input tables
REQUIRED_COLUMNS = {
    1: ("time", "hamiltonian"),
    2: ("time",),
    3: ("n", "seconds_per_step", "scheme"),
    4: ("h", "max_error"),
    5: ("time", "w0_x", "w0_y", "w0_z"),
    6: ("time", "w0_x", "w0_y", "w0_z"),
    7: ("time", "hamiltonian", "momentum_00", "momentum_01", "momentum_02"),
}

_DESCRIPTIONS = {
    1: "eigenvalue and energy drift, stacked panels",
    2: "eigenvalue drift",
    3: "cost per step versus particle count, log-log",
    4: "maximum error versus step size, log-log, with the h^2 guide line",
    5: "vortex trajectories with the initial equilateral triangle",
    6: "vortex trajectories with the geodesic through the initial positions",
    7: "momentum and energy drift, stacked panels per run",
}


@dataclass(frozen=True)
class FigureRecipe:
    """Inputs and styling for one rendered figure."""

    figure_id: int
    inputs: tuple[Path, ...]
    output: Path
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"figure_id must be one of {FIGURE_IDS}")
        if not self.inputs:
            raise ValueError("recipe needs at least one input CSV")

    @property
    def required_columns(self):
        return REQUIRED_COLUMNS[self.figure_id]

    @property
    def description(self):
        return _DESCRIPTIONS[self.figure_id]


def _existing(*candidates: Path) -> Path:
    for path in candidates:
        if path.exists():
            return path
    return candidates[-1]


def recipe_for_figure(figure_id: int, run_dir: Path, output: Path | None = None) -> FigureRecipe:
    """Resolve the conventional artifact layout of `isoflow reproduce-figure`.

    Falls back to files directly inside run_dir so hand-built directories
    work too.
    """
    run_dir = Path(run_dir)
    base = run_dir / f"fig{figure_id}"
    if not base.exists():
        base = run_dir
    if figure_id in (1, 2):
        inputs = (_existing(base / "drifts.csv"),)
    elif figure_id == 3:
        inputs = (_existing(base / "bench.csv"),)
    elif figure_id == 4:
        nested = sorted(base.glob("*/order.csv"))
        inputs = tuple(nested) or (_existing(base / "order.csv"),)
    elif figure_id in (5, 6):
        inputs = (_existing(base / "states.csv"),)
    else:
        nested = sorted(base.glob("*/drifts.csv"))
        inputs = tuple(nested) or (_existing(base / "drifts.csv"),)
    out = output or run_dir / f"fig{figure_id}.png"
    return FigureRecipe(figure_id=figure_id, inputs=inputs, output=Path(out))
