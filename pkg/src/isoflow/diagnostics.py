"""Drift measurement, convergence-order estimation, and cost benchmarks.

Works against plain stepper callables: ``stepper(state)`` returning either
the next state or ``(next_state, StepInfo)``.  States must support
subtraction and numpy flattening for the order estimator.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .errors import IsoflowError
from .solvers import StepInfo

# Errors below this are treated as round-off floor and excluded from
# the order fit.
ROUNDOFF_FLOOR = 1e-12


@dataclass
class TrajectoryRecord:
    """Time-stamped states plus per-step diagnostics.

    observations maps observer name to an array with one row per recorded
    time (scalar observers give 1-D arrays).  On stepper failure the record
    is truncated at the last completed step and `failure` carries the
    annotated error message.
    """

    times: np.ndarray
    states: list
    observations: dict[str, np.ndarray]
    iterations: np.ndarray
    step_seconds: np.ndarray
    failure: str | None = None
    failure_step: int | None = None

    @property
    def n_steps(self) -> int:
        return len(self.times) - 1


@dataclass
class DriftSeries:
    """|Q(t_k) - Q(0)| for one named scalar quantity."""

    name: str
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")
        if np.any(self.values < 0):
            raise ValueError("drift values must be nonnegative")

    @classmethod
    def from_record(cls, record: TrajectoryRecord, name: str, component: int | None = None):
        """Drift of a recorded observer; vector observers need a component
        index (or use component=None on scalars)."""
        raw = np.asarray(record.observations[name])
        if raw.ndim > 1:
            if component is None:
                raise ValueError(f"observer {name!r} is vector-valued; pick a component")
            raw = raw[:, component]
            name = f"{name}[{component}]"
        return cls(name=name, times=record.times, values=np.abs(raw - raw[0]))


def _advance(stepper, state):
    out = stepper(state)
    if isinstance(out, tuple) and len(out) == 2 and isinstance(out[1], StepInfo):
        return out
    return out, StepInfo(0, np.nan)


def _n_steps(t_final: float, h: float) -> int:
    return int(math.ceil(t_final / h - 1e-9)) if t_final > 0 else 0


def run_trajectory(
    stepper: Callable,
    initial_state,
    h: float,
    t_final: float,
    observers: dict[str, Callable] | None = None,
) -> TrajectoryRecord:
    """Apply the stepper ceil(t_final/h) times, recording observers each step.

    Observers are functions of the state returning a scalar or 1-D array.
    Stepper errors abort the run; the partial record carries the failing
    step index and message.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if t_final < 0:
        raise ValueError("t_final must be nonnegative")
    observers = observers or {}
    n_steps = _n_steps(t_final, h)

    states = [initial_state]
    times = [0.0]
    obs_rows: dict[str, list] = {name: [fn(initial_state)] for name, fn in observers.items()}
    iters: list[int] = []
    seconds: list[float] = []
    failure = None
    failure_step = None

    state = initial_state
    for k in range(1, n_steps + 1):
        tic = time.perf_counter()
        try:
            state, info = _advance(stepper, state)
        except IsoflowError as exc:
            failure = f"step {k}: {exc}"
            failure_step = k
            break
        seconds.append(time.perf_counter() - tic)
        iters.append(info.iters)
        states.append(state)
        times.append(k * h)
        for name, fn in observers.items():
            obs_rows[name].append(fn(state))

    return TrajectoryRecord(
        times=np.asarray(times),
        states=states,
        observations={name: np.asarray(rows) for name, rows in obs_rows.items()},
        iterations=np.asarray(iters, dtype=int),
        step_seconds=np.asarray(seconds),
        failure=failure,
        failure_step=failure_step,
    )


@dataclass
class OrderEstimate:
    """Max errors against a reference per step size, and the log-log slope."""

    step_sizes: np.ndarray
    max_errors: np.ndarray
    fitted_slope: float

    def __post_init__(self):
        if np.any(np.diff(self.step_sizes) >= 0):
            raise ValueError("step_sizes must be strictly decreasing")
        if np.any(self.max_errors <= 0):
            raise ValueError("errors must be positive")


def _flat_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=complex).ravel()))


def estimate_order(
    make_stepper: Callable[[float], Callable],
    initial_state,
    t_final: float,
    h_list: Sequence[float],
    *,
    ref_factor: int = 8,
    analytic: Callable[[float], Any] | None = None,
    roundoff_floor: float = ROUNDOFF_FLOOR,
) -> OrderEstimate:
    """Self-convergence (or analytic-reference) order study.

    make_stepper(h) must return a stepper for step size h.  The error for
    each h is max_k ||w(k h) - w_k|| over the run; the reference is the
    analytic solution when given, otherwise the same scheme at
    min(h)/ref_factor.  The fitted slope is the least-squares line through
    (log h, log err), ignoring errors at or below the round-off floor.
    """
    h_list = sorted(float(h) for h in h_list)[::-1]
    if len(h_list) < 3:
        raise ValueError("need at least 3 step sizes")
    for h in h_list:
        ratio = t_final / h
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ValueError(f"h={h} does not divide t_final={t_final} evenly")

    if analytic is None:
        h_ref = h_list[-1] / ref_factor
        ref_record = run_trajectory(make_stepper(h_ref), initial_state, h_ref, t_final)
        if ref_record.failure:
            raise IsoflowError(f"reference trajectory failed: {ref_record.failure}")

        def reference(t: float):
            idx = round(t / h_ref)
            if abs(idx * h_ref - t) > 1e-9 * max(1.0, t):
                raise ValueError(f"t={t} not on the reference grid")
            return ref_record.states[idx]

    else:
        reference = analytic

    errors = []
    for h in h_list:
        record = run_trajectory(make_stepper(h), initial_state, h, t_final)
        if record.failure:
            raise IsoflowError(f"trajectory at h={h} failed: {record.failure}")
        err = max(
            _flat_norm(np.asarray(state) - np.asarray(reference(t)))
            for t, state in zip(record.times[1:], record.states[1:])
        )
        errors.append(err)

    hs = np.asarray(h_list)
    errs = np.asarray(errors)
    keep = errs > roundoff_floor
    if np.count_nonzero(keep) < 2:
        raise ValueError("not enough points above the round-off floor to fit a slope")
    slope = float(np.polyfit(np.log(hs[keep]), np.log(errs[keep]), 1)[0])
    return OrderEstimate(step_sizes=hs, max_errors=errs, fitted_slope=slope)


@dataclass(frozen=True)
class BenchRow:
    n: int
    seconds_per_step: float


def bench_cost(
    make_stepper: Callable[[int], Callable],
    state_family: Callable[[int], Any],
    n_list: Sequence[int],
    steps: int,
    *,
    warmup: int = 10,
    repeats: int = 5,
) -> list[BenchRow]:
    """Median-of-means wall-clock cost per step for each problem size.

    Each repeat times `steps` steps in one batch after `warmup` unrecorded
    steps (per-step times can sit below clock resolution, so only the batch
    is timed).  Runs single-threaded in call order to keep cells comparable.
    """
    if steps < 10:
        raise ValueError("need at least 10 timed steps")
    rows = []
    for n in n_list:
        means = []
        for _ in range(repeats):
            stepper = make_stepper(n)
            state = state_family(n)
            for _ in range(warmup):
                state, _info = _advance(stepper, state)
            tic = time.perf_counter()
            for _ in range(steps):
                state, _info = _advance(stepper, state)
            means.append((time.perf_counter() - tic) / steps)
        rows.append(BenchRow(n=int(n), seconds_per_step=float(np.median(means))))
    return rows
