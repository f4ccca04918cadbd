"""Minimal-variable schemes on R^3 and product chains (R^3)^N.

A chain state is a float array of shape (N, 3); a field's b_fn maps a
chain to per-particle coefficient vectors of the same shape (it may couple
the particles).  All three schemes integrate dw_i/dt = B_i(w) x w_i, the
vector form of the matrix flow dW/dt = [B, W] under hat(w)v = w x v, and
are mutually consistent: the minimal midpoint is conjugate to the 3x3
matrix step through hat, and coincides with the classical midpoint
whenever B(w).w = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AntipodalDegeneracyError, DimensionMismatchError
from .solvers import (
    SolverConfig,
    SolverMethod,
    StepInfo,
    probe_batched,
    solve_fixed_point,
    solve_newton_continuation,
)

DEFAULT_SOLVER = SolverConfig()

# Spherical midpoint: |w_{k+1} + w_k| below this aborts the step.
ANTIPODAL_THRESHOLD = 1e-8


@dataclass
class Vec3Field:
    """Per-particle coefficient map B (possibly coupling the whole chain)."""

    b_fn: Callable[[np.ndarray], np.ndarray]
    hamiltonian: Callable[[np.ndarray], float] | None = None


def as_chain(points) -> np.ndarray:
    """Coerce to a finite (N, 3) float chain; a single 3-vector becomes N=1."""
    w = np.asarray(points, dtype=float)
    if w.ndim == 1 and w.size == 3:
        w = w[None, :]
    if w.ndim != 2 or w.shape[1] != 3 or w.shape[0] < 1:
        raise DimensionMismatchError(f"expected an (N, 3) chain, got shape {w.shape}")
    if not np.isfinite(w).all():
        raise ValueError("chain entries must be finite")
    return w.copy()


def hat(w) -> np.ndarray:
    """so(3) identification: hat(w) v = w x v for all v."""
    x, y, z = np.asarray(w, dtype=float).reshape(3)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(m) -> np.ndarray:
    """Inverse of hat on skew 3x3 matrices."""
    m = np.asarray(m)
    return np.array([m[2, 1], m[0, 2], m[1, 0]], dtype=float)


def _dot(a, b):
    return np.sum(a * b, axis=-1, keepdims=True)


def _solve_chain(
    update_factory: Callable[[float], Callable[[np.ndarray], np.ndarray]],
    x0: np.ndarray,
    h: float,
    cfg: SolverConfig,
    b_fn_for_probe: Callable[[np.ndarray], np.ndarray] | None = None,
    update_many_factory: Callable[[float], Callable[[np.ndarray], np.ndarray]] | None = None,
) -> tuple[np.ndarray, int, float]:
    """Solve x = U_h(x) over a chain by fixed point or (continuation) Newton.

    update_factory(h) builds the scheme's update map at a given step size,
    so the Newton path can warm-start through intermediate step sizes when
    the direct solve from x0 stalls.
    """
    if cfg.method is SolverMethod.FIXED_POINT:
        return solve_fixed_point(update_factory(h), x0, cfg)
    shape = x0.shape

    def residual_factory(h_cur):
        update = update_factory(h_cur)

        def residual(vec):
            x = vec.reshape(shape)
            return (x - update(x)).ravel()

        return residual

    residual_many_factory = None
    if update_many_factory is not None and b_fn_for_probe is not None and probe_batched(
        b_fn_for_probe, x0
    ):

        def residual_many_factory(h_cur):
            update_many = update_many_factory(h_cur)

            def residual_many(rows):
                xs = rows.reshape((rows.shape[0],) + shape)
                return (xs - update_many(xs)).reshape(rows.shape[0], -1)

            return residual_many

    vec, iters, res = solve_newton_continuation(
        residual_factory, x0.ravel(), h, cfg, residual_many_factory
    )
    return vec.reshape(shape), iters, res


def _min_midpoint_core(
    field: Vec3Field,
    w_k: np.ndarray,
    h: float,
    cfg: SolverConfig,
) -> tuple[np.ndarray, np.ndarray, int, float]:
    b_fn = field.b_fn
    last: dict = {"x": None, "b": None}

    def eval_b(x):
        b = b_fn(x)
        last["x"] = x
        last["b"] = b
        return b

    def update_factory(h_cur):
        def update(x):
            b = eval_b(x)
            return w_k - 0.5 * h_cur * np.cross(x, b) - 0.25 * h_cur * h_cur * b * _dot(b, x)

        return update

    def update_many_factory(h_cur):
        def update_many(xs):
            bs = b_fn(xs)
            return w_k - 0.5 * h_cur * np.cross(xs, bs) - 0.25 * h_cur * h_cur * bs * _dot(bs, xs)

        return update_many

    w_tilde, iters, res = _solve_chain(update_factory, w_k, h, cfg, b_fn, update_many_factory)
    if last["x"] is not w_tilde and not np.array_equal(last["x"], w_tilde):
        last["b"] = b_fn(w_tilde)
    b = last["b"]
    quad = 0.25 * h * h * b * _dot(b, w_tilde)
    w_next = w_tilde - 0.5 * h * np.cross(w_tilde, b) + quad
    return w_next, w_tilde, iters, res


def step_min_midpoint_r3(
    field: Vec3Field,
    w_k: np.ndarray,
    h: float,
    cfg: SolverConfig = DEFAULT_SOLVER,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Minimal midpoint on (R^3)^N; returns (w_next, w_tilde, iters).

    Solves per particle, coupled through B:

        w_k = w~ + (h/2) w~ x B(w~) + (h^2/4) B(w~) (B(w~).w~)

    then flips the sign of the cross term for the update.  The quadratic
    term is identical in both lines, so each |w_i| is preserved exactly.
    (Note the + on the quadratic term: it is the hat-coordinate image of
    the matrix product B W B, whose so(3) reduction is -(B.w) hat(B).)
    """
    w_next, w_tilde, iters, _ = _min_midpoint_core(field, w_k, h, cfg)
    return w_next, w_tilde, iters


def _chord_point(w_k: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Projection point of the spherical midpoint: geometric-mean-scaled chord.

    sqrt(|y|)sqrt(|w|)(y+w)/|y+w| per particle; for unit vectors this is
    the normalized chord midpoint.
    """
    s = y + w_k
    ns = np.linalg.norm(s, axis=-1, keepdims=True)
    if np.min(ns) < ANTIPODAL_THRESHOLD:
        raise AntipodalDegeneracyError(
            f"|w_next + w_k| = {float(np.min(ns)):.3e} below {ANTIPODAL_THRESHOLD}"
        )
    ny = np.linalg.norm(y, axis=-1, keepdims=True)
    nw = np.linalg.norm(w_k, axis=-1, keepdims=True)
    return np.sqrt(ny * nw) * s / ns


def _solve_midpoint_relation(
    field: Vec3Field,
    w_k: np.ndarray,
    h: float,
    cfg: SolverConfig,
    midpoint: Callable[[np.ndarray, np.ndarray], np.ndarray],
) -> tuple[np.ndarray, int, float]:
    b_fn = field.b_fn

    def update_factory(h_cur):
        def update(y):
            m = midpoint(w_k, y)
            return w_k + h_cur * np.cross(b_fn(m), m)

        return update

    return _solve_chain(update_factory, w_k, h, cfg, b_fn, update_factory)


def step_spherical_midpoint(
    field: Vec3Field,
    w_k: np.ndarray,
    h: float,
    cfg: SolverConfig = DEFAULT_SOLVER,
) -> np.ndarray:
    """Spherical midpoint step; preserves every |w_i| to solver tolerance.

    Implicit relation w_{k+1} = w_k + h B(m) x m with m the
    geometric-mean-scaled chord point of w_k and w_{k+1}.
    """
    y, _, _ = _solve_midpoint_relation(field, w_k, h, cfg, _chord_point)
    return y


def step_classical_midpoint(
    field: Vec3Field,
    w_k: np.ndarray,
    h: float,
    cfg: SolverConfig = DEFAULT_SOLVER,
) -> np.ndarray:
    """Classical implicit midpoint in vector form.

    w_{k+1} = w_k + h B(m) x m with m = (w_k + w_{k+1})/2.
    """
    y, _, _ = _solve_midpoint_relation(field, w_k, h, cfg, lambda w, y: 0.5 * (w + y))
    return y


def make_stepper(
    field: Vec3Field,
    h: float,
    cfg: SolverConfig = DEFAULT_SOLVER,
    scheme: str = "minimal-midpoint",
) -> Callable[[np.ndarray], tuple[np.ndarray, StepInfo]]:
    """Adapter for the diagnostics layer: chain -> (chain, StepInfo)."""
    if scheme == "minimal-midpoint":

        def stepper(w):
            w_next, _, iters, res = _min_midpoint_core(field, w, h, cfg)
            return w_next, StepInfo(iters, res)

        return stepper
    if scheme == "spherical-midpoint":
        midpoint = _chord_point
    elif scheme == "classical-midpoint":
        midpoint = lambda w, y: 0.5 * (w + y)  # noqa: E731
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    def stepper(w):
        y, iters, res = _solve_midpoint_relation(field, w, h, cfg, midpoint)
        return y, StepInfo(iters, res)

    return stepper
