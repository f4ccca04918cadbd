"""Figure rendering for isoflow experiment CSV artifacts."""

from .errors import EmptyInputError, MissingColumnError, PlotkitError
from .recipes import FIGURE_IDS, FigureRecipe, recipe_for_figure
from .render import build_figure, render
from .tables import load_table, require_columns

__version__ = "0.1.0"

__all__ = [
    "EmptyInputError",
    "FIGURE_IDS",
    "FigureRecipe",
    "MissingColumnError",
    "PlotkitError",
    "build_figure",
    "load_table",
    "recipe_for_figure",
    "render",
    "require_columns",
]
