from pathlib import Path

import pytest

from plotkit import (
    EmptyInputError,
    FigureRecipe,
    MissingColumnError,
    build_figure,
    load_table,
    recipe_for_figure,
    render,
)

from conftest import write_csv


# ---------------------------------------------------------------------------
# tables


def test_load_table_roundtrip(drift_csv):
    table = load_table(drift_csv)
    assert set(table) >= {"time", "hamiltonian", "eigenvalue_00"}
    assert len(table["time"]) == 6


def test_load_table_empty_file_raises(tmp_path):
    empty = tmp_path / "drifts.csv"
    empty.write_text("time,hamiltonian\n")
    with pytest.raises(EmptyInputError):
        load_table(empty)
    blank = tmp_path / "blank.csv"
    blank.write_text("")
    with pytest.raises(EmptyInputError):
        load_table(blank)


# ---------------------------------------------------------------------------
# recipes


def test_recipe_validation(tmp_path):
    with pytest.raises(ValueError):
        FigureRecipe(figure_id=9, inputs=(tmp_path / "x.csv",), output=tmp_path / "o.png")
    with pytest.raises(ValueError):
        FigureRecipe(figure_id=1, inputs=(), output=tmp_path / "o.png")


def test_recipe_resolution_prefers_fig_subdir(tmp_path, drift_csv):
    fig_dir = tmp_path / "fig1"
    fig_dir.mkdir()
    (fig_dir / "drifts.csv").write_text(drift_csv.read_text())
    recipe = recipe_for_figure(1, tmp_path)
    assert recipe.inputs[0].parent.name == "fig1"


# ---------------------------------------------------------------------------
# rendering


def test_render_rigid_body_panels(drift_csv, tmp_path):
    recipe = FigureRecipe(figure_id=1, inputs=(drift_csv,), output=tmp_path / "fig1.png")
    fig = build_figure(recipe)
    assert len(fig.axes) == 2  # eigenvalue panel above, energy panel below
    out = render(recipe)
    assert out.exists() and out.stat().st_size > 0


def test_render_missing_column_named_error(tmp_path):
    bad = write_csv(tmp_path / "drifts.csv", ["time"], [[0.0], [0.1]])
    recipe = FigureRecipe(figure_id=1, inputs=(bad,), output=tmp_path / "fig1.png")
    with pytest.raises(MissingColumnError) as err:
        render(recipe)
    assert "hamiltonian" in str(err.value)
    assert not (tmp_path / "fig1.png").exists()  # no empty image on failure


def test_render_missing_eigenvalue_columns(tmp_path):
    bad = write_csv(
        tmp_path / "drifts.csv", ["time", "hamiltonian"], [[0.0, 0.0], [0.1, 1e-9]]
    )
    recipe = FigureRecipe(figure_id=2, inputs=(bad,), output=tmp_path / "fig2.png")
    with pytest.raises(MissingColumnError):
        render(recipe)


def test_render_empty_drift_file_fails(tmp_path):
    empty = tmp_path / "drifts.csv"
    empty.write_text("time,hamiltonian,eigenvalue_00\n")
    recipe = FigureRecipe(figure_id=1, inputs=(empty,), output=tmp_path / "fig1.png")
    with pytest.raises(EmptyInputError):
        render(recipe)
    assert not (tmp_path / "fig1.png").exists()


def test_render_order_includes_h2_guide(order_csv, tmp_path):
    recipe = FigureRecipe(figure_id=4, inputs=(order_csv,), output=tmp_path / "fig4.png")
    fig = build_figure(recipe)
    labels = [line.get_label() for line in fig.axes[0].get_lines()]
    assert "h^2" in labels
    render(recipe)
    assert (tmp_path / "fig4.png").stat().st_size > 0


def test_render_vortex_trajectories_with_triangle(states_csv, tmp_path):
    recipe = FigureRecipe(figure_id=5, inputs=(states_csv,), output=tmp_path / "fig5.png")
    fig = build_figure(recipe)
    labels = [line.get_label() for line in fig.axes[0].get_lines()]
    assert "initial triangle" in labels
    assert sum(1 for lab in labels if lab.startswith("vortex ")) == 3


def test_render_vortex_geodesic_reference(states_csv, tmp_path):
    recipe = FigureRecipe(figure_id=6, inputs=(states_csv,), output=tmp_path / "fig6.png")
    fig = build_figure(recipe)
    labels = [line.get_label() for line in fig.axes[0].get_lines()]
    assert "reference geodesic" in labels


def test_render_cost_figure(tmp_path):
    path = tmp_path / "bench.csv"
    lines = ["n,seconds_per_step,scheme"]
    for scheme in ("minimal-midpoint", "spherical-midpoint"):
        for n, sec in ((10, 1e-4), (100, 9e-4)):
            lines.append(f"{n},{format(sec, '.17e')},{scheme}")
    path.write_text("\n".join(lines) + "\n")
    recipe = FigureRecipe(figure_id=3, inputs=(path,), output=tmp_path / "fig3.png")
    out = render(recipe)
    assert out.stat().st_size > 0


def test_render_cost_figure_missing_column(tmp_path):
    path = tmp_path / "bench.csv"
    path.write_text("n,seconds_per_step\n10,1e-4\n")
    recipe = FigureRecipe(figure_id=3, inputs=(path,), output=tmp_path / "fig3.png")
    with pytest.raises(MissingColumnError):
        render(recipe)


def test_render_conservation_grid(tmp_path):
    header = ["time", "hamiltonian", "momentum_00", "momentum_01", "momentum_02"]
    rows = [[0.1 * k, 1e-9 * k, 1e-12, 2e-12, 3e-12] for k in range(5)]
    a = write_csv(tmp_path / "equilateral" / "drifts.csv", header, rows)
    b = write_csv(tmp_path / "geodesic" / "drifts.csv", header, rows)
    recipe = FigureRecipe(figure_id=7, inputs=(a, b), output=tmp_path / "fig7.png")
    fig = build_figure(recipe)
    assert len(fig.axes) == 4
    render(recipe)


def test_render_deterministic_bytes(drift_csv, tmp_path):
    r1 = FigureRecipe(figure_id=1, inputs=(drift_csv,), output=tmp_path / "a.png")
    r2 = FigureRecipe(figure_id=1, inputs=(drift_csv,), output=tmp_path / "b.png")
    render(r1)
    render(r2)
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()
