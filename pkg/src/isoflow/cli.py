"""Experiment command line: run the benchmark systems, write CSV artifacts.

Subcommands: run, list, reproduce-figure, convergence, bench.  Exit codes:
0 success, 2 configuration error, 3 solver failure, 4 I/O error.  Every
run emits states.csv, drifts.csv and a manifest.json into the output
directory; convergence runs add order*.csv and bench runs add bench.csv.
Numeric CSV payloads are written with 17 significant digits so replays
round-trip exactly; identical configs and seeds reproduce byte-identical
numeric payloads.
"""

from __future__ import annotations

import argparse
import difflib
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field, fields as dataclass_fields
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import DriftSeries, bench_cost, estimate_order, run_trajectory
from .errors import ConfigError, IsoflowError
from .matrixcore import spectrum_key
from .scheme import make_stepper as matrix_stepper
from .sl2 import l_inner, make_stepper as sl2_stepper
from .solvers import SolverConfig, SolverMethod
from .systems import (
    BrockettSpec,
    PointVortexSpec,
    RigidBodySpec,
    SpinChainSpec,
    brockett_initial,
    brockett_problem,
    equilateral_vortex_spec,
    geodesic_vortex_spec,
    point_vortex_field,
    point_vortex_state,
    rigid_body_initial,
    rigid_body_problem,
    spin_chain_field,
    spin_chain_initial,
    total_spin,
)
from .vec3 import make_stepper as vec3_stepper

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4

EXPERIMENTS = ("rigid-body", "brockett", "spin-chain", "point-vortex", "convergence", "bench")
SCHEMES = (
    "minimal-midpoint",
    "spherical-midpoint",
    "classical-midpoint",
    "hyperbolic-midpoint",
)

_SCHEME_COMPAT = {
    "rigid-body": ("minimal-midpoint",),
    "brockett": ("minimal-midpoint",),
    "spin-chain": ("minimal-midpoint", "spherical-midpoint", "classical-midpoint"),
    "point-vortex": ("hyperbolic-midpoint",),
    "convergence": ("minimal-midpoint", "spherical-midpoint", "classical-midpoint"),
    "bench": ("minimal-midpoint", "spherical-midpoint"),
}

_INITIAL_CHOICES = {
    "rigid-body": ("standard",),
    "brockett": ("random",),
    "spin-chain": ("curve", "random"),
    "point-vortex": ("equilateral", "geodesic"),
    "convergence": ("curve", "random"),
    "bench": ("random",),
}

_EXPERIMENT_DEFAULTS = {
    "rigid-body": dict(scheme="minimal-midpoint", h=0.1, t_final=100.0, solver="newton", initial="standard"),
    "brockett": dict(scheme="minimal-midpoint", h=0.1, t_final=1000.0, solver="newton", initial="random"),
    "spin-chain": dict(scheme="minimal-midpoint", h=0.1, t_final=1000.0, solver="fixed-point", initial="curve"),
    "point-vortex": dict(scheme="hyperbolic-midpoint", h=0.01, t_final=10.0, solver="fixed-point", initial="equilateral"),
    "convergence": dict(scheme="minimal-midpoint", h=1.0, t_final=1.0, solver="auto", initial="curve"),
    "bench": dict(scheme="minimal-midpoint", h=0.1, t_final=0.0, solver="fixed-point", initial="random"),
}


@dataclass
class ExperimentConfig:
    """One experiment invocation; built from the config file plus flags."""

    experiment: str
    scheme: str
    h: float
    t_final: float
    solver: str = "fixed-point"
    tol: float = 1e-13
    max_iters: int = 100
    newton_fd_step: float = 1e-7
    seed: int = 1234
    n: int = 10
    n_particles: int = 100
    initial: str = "standard"
    h_list: tuple[float, ...] = ()
    n_list: tuple[int, ...] = (10, 50, 100, 200)
    steps: int = 40
    repeats: int = 5
    state_stride: int = 1
    output_dir: Path = Path("runs")

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(_unknown("experiment", self.experiment, EXPERIMENTS))
        if self.scheme not in SCHEMES:
            raise ConfigError(_unknown("scheme", self.scheme, SCHEMES))
        if self.scheme not in _SCHEME_COMPAT[self.experiment]:
            raise ConfigError(
                f"scheme {self.scheme!r} is not valid for experiment {self.experiment!r}; "
                f"choose from {_SCHEME_COMPAT[self.experiment]}"
            )
        if self.initial not in _INITIAL_CHOICES[self.experiment]:
            raise ConfigError(
                f"initial {self.initial!r} is not valid for {self.experiment!r}; "
                f"choose from {_INITIAL_CHOICES[self.experiment]}"
            )
        if self.solver not in ("fixed-point", "newton", "auto"):
            raise ConfigError(_unknown("solver", self.solver, ("fixed-point", "newton", "auto")))
        if not (self.h > 0):
            raise ConfigError("h must be positive")
        if self.t_final < 0:
            raise ConfigError("t_final must be nonnegative")
        if self.tol <= 0 or self.max_iters < 1 or self.newton_fd_step <= 0:
            raise ConfigError("solver parameters must be positive (tol, max_iters, newton_fd_step)")
        if self.state_stride < 1:
            raise ConfigError("state_stride must be at least 1")
        if self.experiment == "convergence" and self.h_list and len(self.h_list) < 3:
            raise ConfigError("convergence needs at least 3 step sizes")

    def solver_config(self, h: float | None = None) -> SolverConfig:
        method = self.solver
        if method == "auto":
            method = "newton" if (h or self.h) > 0.02 else "fixed-point"
        return SolverConfig(
            method=SolverMethod.NEWTON if method == "newton" else SolverMethod.FIXED_POINT,
            tol=self.tol,
            max_iters=self.max_iters,
            newton_fd_step=self.newton_fd_step,
        )


def _unknown(kind: str, value: str, choices) -> str:
    hint = difflib.get_close_matches(str(value), list(choices), n=1)
    suffix = f"; did you mean {hint[0]!r}?" if hint else f"; choose from {tuple(choices)}"
    return f"unknown {kind} {value!r}{suffix}"


def parse_config_file(path: Path) -> dict[str, str]:
    """Flat `key = value` file; blank lines and # comments ignored."""
    values: dict[str, str] = {}
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


_FIELD_PARSERS = {
    "h": float,
    "t_final": float,
    "tol": float,
    "newton_fd_step": float,
    "max_iters": int,
    "seed": int,
    "n": int,
    "n_particles": int,
    "steps": int,
    "repeats": int,
    "state_stride": int,
    "h_list": lambda s: tuple(float(v) for v in str(s).split(",") if v.strip()),
    "n_list": lambda s: tuple(int(v) for v in str(s).split(",") if v.strip()),
    "output_dir": Path,
}


def build_config(experiment: str, file_values: dict, flag_values: dict) -> ExperimentConfig:
    """Merge defaults <- config file <- flags (flags win)."""
    if experiment not in EXPERIMENTS:
        raise ConfigError(_unknown("experiment", experiment, EXPERIMENTS))
    merged: dict = dict(_EXPERIMENT_DEFAULTS[experiment])
    merged["experiment"] = experiment
    known = {f.name for f in dataclass_fields(ExperimentConfig)}
    for source in (file_values, flag_values):
        for key, value in source.items():
            if value is None:
                continue
            if key not in known:
                raise ConfigError(_unknown("config key", key, sorted(known)))
            parser = _FIELD_PARSERS.get(key)
            try:
                if isinstance(value, str) and parser is not None:
                    merged[key] = parser(value)
                elif isinstance(value, str):
                    merged[key] = value
                else:
                    merged[key] = value  # native value from a preset or argparse
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from exc
    cfg = ExperimentConfig(**merged)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# CSV and manifest output


def _fmt(x) -> str:
    return format(float(x), ".17e")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _state_columns(state) -> tuple[list[str], callable]:
    arr = np.asarray(state)
    if arr.ndim == 2 and arr.shape[1] == 3:
        names = [f"w{i}_{ax}" for i in range(arr.shape[0]) for ax in "xyz"]
        return names, lambda s: [_fmt(v) for v in np.asarray(s).ravel()]
    if np.iscomplexobj(arr):
        n = arr.shape[0]
        names = [f"re_{i}_{j}" for i in range(n) for j in range(n)] + [
            f"im_{i}_{j}" for i in range(n) for j in range(n)
        ]
        return names, lambda s: [_fmt(v) for v in np.asarray(s).real.ravel()] + [
            _fmt(v) for v in np.asarray(s).imag.ravel()
        ]
    n = arr.shape[0]
    names = [f"w_{i}_{j}" for i in range(n) for j in range(n)]
    return names, lambda s: [_fmt(v) for v in np.asarray(s).ravel()]


def write_states_csv(path: Path, record, stride: int = 1) -> int:
    names, render = _state_columns(record.states[0])
    idx = list(range(0, len(record.states), stride))
    if idx[-1] != len(record.states) - 1:
        idx.append(len(record.states) - 1)
    rows = ([str(k), _fmt(record.times[k])] + render(record.states[k]) for k in idx)
    _write_csv(path, ["step", "time"] + names, rows)
    return len(idx)


def _drift_columns(record) -> tuple[list[str], np.ndarray]:
    names: list[str] = []
    cols: list[np.ndarray] = []
    for name, raw in record.observations.items():
        raw = np.asarray(raw)
        if raw.ndim == 1:
            names.append(name)
            cols.append(np.abs(raw - raw[0]))
        else:
            for j in range(raw.shape[1]):
                names.append(f"{name}_{j:02d}")
                cols.append(np.abs(raw[:, j] - raw[0, j]))
    return names, np.column_stack(cols) if cols else np.empty((len(record.times), 0))


def write_drifts_csv(path: Path, record) -> list[str]:
    names, drift = _drift_columns(record)
    rows = (
        [_fmt(record.times[k])] + [_fmt(v) for v in drift[k]] for k in range(len(record.times))
    )
    _write_csv(path, ["time"] + names, rows)
    return names


def write_manifest(
    out_dir: Path,
    config: ExperimentConfig,
    files: list[Path],
    observers: list[str],
    started: float,
    stats: dict,
) -> Path:
    manifest = {
        "library": "isoflow",
        "version": __version__,
        "config": {
            key: (str(value) if isinstance(value, Path) else value)
            for key, value in vars(config).items()
        },
        "observers": observers,
        "started_at": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime(started)),
        "finished_at": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
        "files": {f.name: {"sha256": _sha256(f), "bytes": f.stat().st_size} for f in files},
        "solver_stats": stats,
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


# ---------------------------------------------------------------------------
# Experiment drivers


def _solver_stats(record) -> dict:
    if len(record.iterations) == 0:
        return {"steps": 0}
    return {
        "steps": int(len(record.iterations)),
        "iterations_mean": float(np.mean(record.iterations)),
        "iterations_max": int(np.max(record.iterations)),
        "seconds_per_step_mean": float(np.mean(record.step_seconds)),
        "failure": record.failure,
    }


def _trajectory_outputs(config: ExperimentConfig, record, out_dir: Path, started: float) -> list[Path]:
    states_path = out_dir / "states.csv"
    drifts_path = out_dir / "drifts.csv"
    write_states_csv(states_path, record, config.state_stride)
    observers = write_drifts_csv(drifts_path, record)
    files = [states_path, drifts_path]
    write_manifest(out_dir, config, files, observers, started, _solver_stats(record))
    if record.failure:
        raise IsoflowError(record.failure)
    return files


def _run_rigid_body(config: ExperimentConfig, out_dir: Path, started: float) -> list[Path]:
    spec = RigidBodySpec(n=config.n)
    problem = rigid_body_problem(spec)
    w0 = rigid_body_initial(config.n)
    stepper = matrix_stepper(problem, config.h, config.solver_config())
    observers = {
        "hamiltonian": problem.hamiltonian,
        "eigenvalue": lambda w: spectrum_key(w),
    }
    record = run_trajectory(stepper, w0, config.h, config.t_final, observers)
    return _trajectory_outputs(config, record, out_dir, started)


def _run_brockett(config: ExperimentConfig, out_dir: Path, started: float) -> list[Path]:
    spec = BrockettSpec(n=config.n, seed=config.seed)
    problem = brockett_problem(spec)
    w0 = brockett_initial(spec)
    stepper = matrix_stepper(problem, config.h, config.solver_config())
    observers = {
        "eigenvalue": lambda w: spectrum_key(w),
        "offdiag_norm": problem.invariant_fns["offdiag_norm"],
        "trace_nw": problem.invariant_fns["trace_nw"],
    }
    record = run_trajectory(stepper, w0, config.h, config.t_final, observers)
    return _trajectory_outputs(config, record, out_dir, started)


def _run_spin_chain(config: ExperimentConfig, out_dir: Path, started: float) -> list[Path]:
    spec = SpinChainSpec(n_particles=config.n_particles, initial=config.initial, seed=config.seed)
    field_ = spin_chain_field(spec)
    w0 = spin_chain_initial(spec)
    stepper = vec3_stepper(field_, config.h, config.solver_config(), config.scheme)
    observers = {
        "hamiltonian": field_.hamiltonian,
        "total_spin": lambda w: total_spin(w),
        "min_norm": lambda w: float(np.min(np.linalg.norm(w, axis=1))),
        "max_norm": lambda w: float(np.max(np.linalg.norm(w, axis=1))),
    }
    record = run_trajectory(stepper, w0, config.h, config.t_final, observers)
    return _trajectory_outputs(config, record, out_dir, started)


def _vortex_spec(config: ExperimentConfig) -> PointVortexSpec:
    return equilateral_vortex_spec() if config.initial == "equilateral" else geodesic_vortex_spec()


def _run_point_vortex(config: ExperimentConfig, out_dir: Path, started: float) -> list[Path]:
    spec = _vortex_spec(config)
    field_ = point_vortex_field(spec)
    state = point_vortex_state(spec)
    stepper = sl2_stepper(field_, config.h, config.solver_config())
    observers = {
        "hamiltonian": field_.hamiltonian,
        "casimir": lambda w: l_inner(w, w),
        "momentum": field_.momentum,
    }
    record = run_trajectory(stepper, state.particles, config.h, config.t_final, observers)
    return _trajectory_outputs(config, record, out_dir, started)


def _run_convergence(config: ExperimentConfig, out_dir: Path, started: float) -> list[Path]:
    spec = SpinChainSpec(n_particles=config.n_particles, initial=config.initial, seed=config.seed)
    field_ = spin_chain_field(spec)
    w0 = spin_chain_initial(spec)
    h_list = config.h_list or tuple(0.5**k for k in range(11))

    def make(h):
        return vec3_stepper(field_, h, config.solver_config(h), config.scheme)

    estimate = estimate_order(make, w0, config.t_final, h_list, ref_factor=8)
    order_path = out_dir / "order.csv"
    _write_csv(
        order_path,
        ["h", "max_error"],
        ([_fmt(h), _fmt(e)] for h, e in zip(estimate.step_sizes, estimate.max_errors)),
    )
    files = [order_path]
    write_manifest(
        out_dir,
        config,
        files,
        [],
        started,
        {"fitted_slope": estimate.fitted_slope, "scheme": config.scheme},
    )
    return files


def _run_bench(config: ExperimentConfig, out_dir: Path, started: float) -> list[Path]:
    cache: dict[int, tuple] = {}

    def setup(n):
        if n not in cache:
            spec = SpinChainSpec(n_particles=n, initial="random", seed=config.seed)
            cache[n] = (spin_chain_field(spec), spin_chain_initial(spec))
        return cache[n]

    rows = []
    for scheme in ("minimal-midpoint", "spherical-midpoint"):
        bench_rows = bench_cost(
            lambda n, s=scheme: vec3_stepper(setup(n)[0], config.h, config.solver_config(), s),
            lambda n: setup(n)[1],
            config.n_list,
            config.steps,
            repeats=config.repeats,
        )
        rows.extend((r.n, r.seconds_per_step, scheme) for r in bench_rows)
    bench_path = out_dir / "bench.csv"
    _write_csv(
        bench_path,
        ["n", "seconds_per_step", "scheme"],
        ([str(n), _fmt(sec), scheme] for n, sec, scheme in rows),
    )
    files = [bench_path]
    write_manifest(out_dir, config, files, [], started, {"cells": len(rows)})
    return files


_RUNNERS = {
    "rigid-body": _run_rigid_body,
    "brockett": _run_brockett,
    "spin-chain": _run_spin_chain,
    "point-vortex": _run_point_vortex,
    "convergence": _run_convergence,
    "bench": _run_bench,
}


def run(config: ExperimentConfig) -> list[Path]:
    """Execute one experiment; returns the list of written artifact paths."""
    config.validate()
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = _RUNNERS[config.experiment](config, out_dir, time.time())
    return files + [out_dir / "manifest.json"]


# ---------------------------------------------------------------------------
# Figure presets

FIGURE_PRESETS: dict[int, list[dict]] = {
    1: [dict(experiment="rigid-body", h=0.1, t_final=100.0, solver="newton", tol=1e-13)],
    2: [dict(experiment="brockett", h=0.1, t_final=1000.0, solver="newton", tol=1e-13, seed=1234)],
    3: [dict(experiment="bench", n_list=(10, 50, 100, 200), steps=40, repeats=5, h=0.1)],
    4: [
        dict(experiment="convergence", scheme="minimal-midpoint", t_final=1.0, subdir="minimal-midpoint"),
        dict(experiment="convergence", scheme="spherical-midpoint", t_final=1.0, subdir="spherical-midpoint"),
    ],
    5: [dict(experiment="point-vortex", initial="equilateral", h=0.01, t_final=10.0, tol=1e-13)],
    6: [dict(experiment="point-vortex", initial="geodesic", h=0.001, t_final=1.0, tol=1e-13)],
    7: [
        dict(experiment="point-vortex", initial="equilateral", h=0.01, t_final=10.0, tol=1e-13, subdir="equilateral"),
        dict(experiment="point-vortex", initial="geodesic", h=0.001, t_final=1.0, tol=1e-13, subdir="geodesic"),
    ],
}

_FIGURE_NOTES = {
    1: "rigid body on so(10): eigenvalue and energy drift, T=100, h=0.1",
    2: "Brockett flow diagonalization: eigenvalue drift, T=1000, h=0.1",
    3: "spin-chain cost per step vs particle count, minimal vs spherical midpoint",
    4: "spin-chain self-convergence order study, T=1, h=0.5^k",
    5: "three hyperbolic vortices, equilateral configuration, T=10, h=0.01",
    6: "three hyperbolic vortices, geodesic configuration, T=1, h=0.001",
    7: "vortex momentum and energy drift for both configurations",
}


def reproduce_figure(figure_id: int, output_dir: Path, overrides: dict) -> list[Path]:
    if figure_id not in FIGURE_PRESETS:
        raise ConfigError(f"unknown figure id {figure_id}; choose 1..7")
    written: list[Path] = []
    for preset in FIGURE_PRESETS[figure_id]:
        preset = dict(preset)
        subdir = preset.pop("subdir", None)
        experiment = preset.pop("experiment")
        target = output_dir / f"fig{figure_id}" / (subdir or "")
        merged = dict(preset)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        merged["output_dir"] = target
        config = build_config(experiment, {}, merged)
        written.extend(run(config))
    return written


def list_experiments(scheme_filter: str | None = None) -> str:
    """Plain-text table of experiments, schemes, and built-in initial data."""
    if scheme_filter is not None and scheme_filter not in SCHEMES:
        raise ConfigError(_unknown("scheme", scheme_filter, SCHEMES))
    lines = [
        f"{'experiment':<14} {'schemes':<58} initial data",
        "-" * 110,
    ]
    shown = 0
    for exp in EXPERIMENTS:
        schemes = _SCHEME_COMPAT[exp]
        if scheme_filter and scheme_filter not in schemes:
            continue
        shown += 1
        lines.append(
            f"{exp:<14} {', '.join(schemes):<58} {', '.join(_INITIAL_CHOICES[exp])}"
        )
    lines.append("")
    lines.append("figure presets (reproduce-figure <id>):")
    for fid, note in _FIGURE_NOTES.items():
        lines.append(f"  {fid}: {note}")
    if scheme_filter and shown == 0:
        lines.append(f"(no experiments support scheme {scheme_filter!r})")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Argument parsing


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key = value config file")
    p.add_argument("--scheme", choices=SCHEMES)
    p.add_argument("--h", dest="h", type=float)
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--solver", choices=("fixed-point", "newton", "auto"))
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--newton-fd-step", dest="newton_fd_step", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--n-particles", dest="n_particles", type=int)
    p.add_argument("--initial")
    p.add_argument("--h-list", dest="h_list")
    p.add_argument("--n-list", dest="n_list")
    p.add_argument("--steps", type=int)
    p.add_argument("--repeats", type=int)
    p.add_argument("--state-stride", dest="state_stride", type=int)
    p.add_argument("--output-dir", dest="output_dir", type=Path)


def _flag_values(args: argparse.Namespace) -> dict:
    keys = (
        "scheme h t_final solver tol max_iters newton_fd_step seed n n_particles "
        "initial h_list n_list steps repeats state_stride output_dir"
    ).split()
    return {key: getattr(args, key, None) for key in keys}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoflow",
        description="structure-preserving integrator experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment")
    p_run.add_argument("--experiment", required=True)
    _add_common_flags(p_run)

    p_list = sub.add_parser("list", help="list experiments, schemes, and presets")
    p_list.add_argument("--scheme", dest="scheme_filter", default=None)

    p_fig = sub.add_parser("reproduce-figure", help="run a preset experiment bundle")
    p_fig.add_argument("figure_id", type=int)
    _add_common_flags(p_fig)

    p_conv = sub.add_parser("convergence", help="shortcut for run --experiment convergence")
    _add_common_flags(p_conv)

    p_bench = sub.add_parser("bench", help="shortcut for run --experiment bench")
    _add_common_flags(p_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list":
            print(list_experiments(args.scheme_filter))
            return EXIT_OK
        if args.command == "reproduce-figure":
            overrides = {k: v for k, v in _flag_values(args).items() if v is not None}
            out_dir = Path(overrides.pop("output_dir", Path("runs")))
            files = reproduce_figure(args.figure_id, out_dir, overrides)
            for f in files:
                print(f)
            return EXIT_OK
        experiment = {
            "run": getattr(args, "experiment", None),
            "convergence": "convergence",
            "bench": "bench",
        }[args.command]
        file_values = parse_config_file(args.config) if args.config else {}
        file_experiment = file_values.pop("experiment", None)
        config = build_config(experiment or file_experiment or "", file_values, _flag_values(args))
        files = run(config)
        for f in files:
            print(f)
        return EXIT_OK
    except ConfigError as exc:
        _emit_error("config", exc)
        return EXIT_CONFIG
    except IsoflowError as exc:
        _emit_error("solver_failure", exc)
        return EXIT_SOLVER
    except OSError as exc:
        _emit_error("io", exc)
        return EXIT_IO


def _emit_error(category: str, exc: Exception) -> None:
    payload = {"error": {"category": category, "type": type(exc).__name__, "message": str(exc)}}
    print(json.dumps(payload), file=sys.stderr)


if __name__ == "__main__":
    raise SystemExit(main())
