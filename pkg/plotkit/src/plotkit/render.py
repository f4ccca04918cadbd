"""Render recipes into image files.

Only reads CSV artifacts; the dynamics is never recomputed.  Rendering is
deterministic for identical inputs: fixed styling, fixed figure sizes, and
pinned image metadata.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import EmptyInputError, MissingColumnError
from .recipes import FigureRecipe
from .tables import columns_matching, load_table, require_columns

_METADATA = {"Software": "plotkit"}

_DRIFT_FLOOR = 1e-18  # keeps zero drifts visible on log axes


def _log_safe(values: np.ndarray) -> np.ndarray:
    return np.maximum(np.abs(values), _DRIFT_FLOOR)


def _load(recipe: FigureRecipe, path: Path) -> dict:
    table = load_table(path)
    require_columns(table, recipe.required_columns, path)
    return table


def _eigen_columns(table: dict, path: Path) -> list[str]:
    names = columns_matching(table, "eigenvalue_")
    if not names:
        raise MissingColumnError(path, {"eigenvalue_*"})
    return names


def _panel_drift(ax, time, series, labels, ylabel):
    for label, values in zip(labels, series):
        ax.semilogy(time, _log_safe(values), lw=0.8, label=label)
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.3)


def _fig_rigid_body(recipe: FigureRecipe):
    table = _load(recipe, recipe.inputs[0])
    eig_cols = _eigen_columns(table, recipe.inputs[0])
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    _panel_drift(
        top,
        table["time"],
        [table[c] for c in eig_cols],
        eig_cols,
        "eigenvalue drift",
    )
    top.set_title("eigenvalue (Casimir) drift and energy drift")
    _panel_drift(bottom, table["time"], [table["hamiltonian"]], ["hamiltonian"], "energy drift")
    bottom.set_xlabel("time")
    return fig


def _fig_brockett(recipe: FigureRecipe):
    table = _load(recipe, recipe.inputs[0])
    eig_cols = _eigen_columns(table, recipe.inputs[0])
    fig, ax = plt.subplots(figsize=(7, 4))
    _panel_drift(ax, table["time"], [table[c] for c in eig_cols], eig_cols, "eigenvalue drift")
    ax.set_xlabel("time")
    ax.set_title("eigenvalue drift along the double-bracket flow")
    return fig


def _fig_cost(recipe: FigureRecipe):
    # the scheme column is text, so this table is parsed directly
    path = Path(recipe.inputs[0])
    raw = [line for line in path.read_text().splitlines() if line]
    if not raw:
        raise EmptyInputError(path)
    names = raw[0].split(",")
    missing = set(recipe.required_columns) - set(names)
    if missing:
        raise MissingColumnError(path, missing)
    if len(raw) < 2:
        raise EmptyInputError(path)
    idx = {name: k for k, name in enumerate(names)}
    by_scheme: dict[str, list[tuple[float, float]]] = {}
    for line in raw[1:]:
        row = line.split(",")
        by_scheme.setdefault(row[idx["scheme"]], []).append(
            (float(row[idx["n"]]), float(row[idx["seconds_per_step"]]))
        )
    fig, ax = plt.subplots(figsize=(6, 4))
    for marker, (scheme, pairs) in zip("os^v", sorted(by_scheme.items())):
        pairs = sorted(pairs)
        ax.loglog(
            [p[0] for p in pairs],
            [p[1] for p in pairs],
            marker=marker,
            lw=1.0,
            label=scheme,
        )
    ax.set_xlabel("spin particles")
    ax.set_ylabel("seconds per step")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    ax.set_title("average cost per step")
    return fig


def _fig_order(recipe: FigureRecipe):
    fig, ax = plt.subplots(figsize=(6, 4.5))
    all_h = []
    styles = ["-.", "--", ":"]
    for style, path in zip(styles * 3, recipe.inputs):
        table = _load(recipe, path)
        order = np.argsort(table["h"])[::-1]
        h, err = table["h"][order], table["max_error"][order]
        all_h.append(h)
        label = recipe.labels.get(str(path), Path(path).parent.name or Path(path).stem)
        ax.loglog(h, _log_safe(err), style, marker="o", ms=3, lw=1.0, label=label)
    h_guide = np.concatenate(all_h)
    h_guide = np.array([h_guide.min(), h_guide.max()])
    ax.loglog(h_guide, h_guide**2, "-", color="black", lw=1.2, label="h^2")
    ax.set_xlabel("step size h")
    ax.set_ylabel("max error over the run")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    ax.set_title("self-convergence error diagram")
    return fig


def _vortex_paths(table: dict) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    paths = []
    i = 0
    while f"w{i}_x" in table:
        paths.append((table[f"w{i}_x"], table[f"w{i}_y"], table[f"w{i}_z"]))
        i += 1
    return paths


def _fig_vortex_trajectories(recipe: FigureRecipe, geodesic: bool):
    table = _load(recipe, recipe.inputs[0])
    paths = _vortex_paths(table)
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    for k, (x, y, _z) in enumerate(paths):
        ax.plot(x, y, lw=1.0, label=f"vortex {k + 1}")
        ax.plot(x[:1], y[:1], "k.", ms=6)
    starts = np.array([[x[0], y[0], z[0]] for x, y, z in paths])
    if geodesic:
        gx, gy = _geodesic_through(starts)
        ax.plot(gx, gy, "r--", lw=1.0, label="reference geodesic")
    else:
        loop = np.vstack([starts, starts[:1]])
        ax.plot(loop[:, 0], loop[:, 1], "r--", lw=1.0, label="initial triangle")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    ax.set_title("vortex trajectories (x-y projection)")
    return fig


def _geodesic_through(starts: np.ndarray):
    """Geodesic of the hyperboloid through the first and last vortex.

    Minkowski-orthonormalize the pair (u timelike, s spacelike); the
    geodesic is cosh(t) u + sinh(t) s.
    """
    signs = np.array([1.0, 1.0, -1.0])
    u = starts[0]
    u = u / np.sqrt(abs(np.sum(u * u * signs)))
    q = starts[-1]
    s = q + np.sum(q * u * signs) * u
    norm = np.sqrt(abs(np.sum(s * s * signs)))
    if norm < 1e-12:
        s = np.array([1.0, 0.0, 0.0])
        norm = 1.0
    s = s / norm
    t = np.linspace(-2.5, 2.5, 400)
    curve = np.cosh(t)[:, None] * u + np.sinh(t)[:, None] * s
    return curve[:, 0], curve[:, 1]


def _fig_vortex_conservation(recipe: FigureRecipe):
    n = len(recipe.inputs)
    fig, axes = plt.subplots(2, n, figsize=(5.5 * n, 6), squeeze=False, sharex="col")
    for col, path in enumerate(recipe.inputs):
        table = _load(recipe, path)
        momentum_cols = columns_matching(table, "momentum_")
        _panel_drift(
            axes[0][col],
            table["time"],
            [table[c] for c in momentum_cols],
            momentum_cols,
            "momentum drift",
        )
        axes[0][col].set_title(Path(path).parent.name or str(path))
        _panel_drift(
            axes[1][col], table["time"], [table["hamiltonian"]], ["hamiltonian"], "energy drift"
        )
        axes[1][col].set_xlabel("time")
    return fig


def build_figure(recipe: FigureRecipe):
    """Build the matplotlib figure for a recipe (no file output)."""
    builders = {
        1: _fig_rigid_body,
        2: _fig_brockett,
        3: _fig_cost,
        4: _fig_order,
        5: lambda r: _fig_vortex_trajectories(r, geodesic=False),
        6: lambda r: _fig_vortex_trajectories(r, geodesic=True),
        7: _fig_vortex_conservation,
    }
    return builders[recipe.figure_id](recipe)


def render(recipe: FigureRecipe) -> Path:
    """Render the recipe and write the image file; returns its path."""
    fig = build_figure(recipe)
    out = Path(recipe.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(out, dpi=130, metadata=_METADATA)
    finally:
        plt.close(fig)
    return out
