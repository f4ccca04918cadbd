"""Render one figure per invocation from a run directory of CSV artifacts."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import PlotkitError
from .recipes import FIGURE_IDS, recipe_for_figure
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotkit", description=__doc__)
    parser.add_argument("figure_id", type=int, choices=FIGURE_IDS)
    parser.add_argument("--run-dir", type=Path, required=True,
                        help="directory holding the experiment CSV outputs")
    parser.add_argument("--out", type=Path, default=None,
                        help="image path (default <run-dir>/fig<id>.png)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    recipe = recipe_for_figure(args.figure_id, args.run_dir, args.out)
    try:
        out = render(recipe)
    except (PlotkitError, OSError) as exc:
        print(f"plotkit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
