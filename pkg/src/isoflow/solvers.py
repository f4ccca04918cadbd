"""Nonlinear solvers shared by the matrix and vector schemes.

Two strategies: plain fixed-point iteration, and a damped Newton iteration
on the flattened real coordinates with a forward-difference Jacobian.  Both
report the iteration count and the final max-entry residual.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import (
    DivergenceDetectedError,
    LinearSolveFailureError,
    NonConvergenceError,
)

# Residual blow-up factor over the initial guess that counts as divergence.
DIVERGENCE_FACTOR = 1e6

# Backtracking: halve the Newton step at most this many times.
_MAX_BACKTRACKS = 25

StepInfo = namedtuple("StepInfo", ["iters", "residual"])


class SolverMethod(Enum):
    FIXED_POINT = "fixed-point"
    NEWTON = "newton"


@dataclass(frozen=True)
class SolverConfig:
    """Nonlinear-solver selection and stopping parameters.

    tol is a max-entry-magnitude residual threshold; newton_fd_step is the
    forward-difference increment used to assemble the Newton Jacobian.
    """

    method: SolverMethod = SolverMethod.FIXED_POINT
    tol: float = 1e-13
    max_iters: int = 100
    newton_fd_step: float = 1e-7

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.newton_fd_step <= 0:
            raise ValueError("newton_fd_step must be positive")


def _max_abs(x: np.ndarray) -> float:
    return float(np.max(np.abs(x))) if x.size else 0.0


def solve_fixed_point(
    step_map: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    cfg: SolverConfig,
) -> tuple[np.ndarray, int, float]:
    """Iterate x <- F(x) until max|F(x) - x| <= cfg.tol.

    Returns the iterate x whose own residual meets the tolerance (so a
    value cached by step_map during its last evaluation belongs to the
    returned point).  Raises DivergenceDetectedError when the residual
    grows by more than DIVERGENCE_FACTOR over the initial guess's, and
    NonConvergenceError at the iteration cap.
    """
    x = x0
    first_residual = None
    residual = np.inf
    for it in range(1, cfg.max_iters + 1):
        fx = step_map(x)
        residual = _max_abs(fx - x)
        if not np.isfinite(residual):
            raise DivergenceDetectedError(it, residual, first_residual or 0.0)
        if first_residual is None:
            first_residual = residual
        if residual <= cfg.tol:
            return x, it, residual
        if residual > DIVERGENCE_FACTOR * max(first_residual, 1e-300):
            raise DivergenceDetectedError(it, residual, first_residual)
        x = fx
    raise NonConvergenceError(cfg.max_iters, residual)


def _fd_jacobian(
    residual: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    g: np.ndarray,
    fd_step: float,
    residual_many: Callable[[np.ndarray], np.ndarray] | None,
) -> np.ndarray:
    d = x.size
    if residual_many is not None:
        points = x[None, :] + fd_step * np.eye(d)
        return (residual_many(points) - g[None, :]).T / fd_step
    jac = np.empty((d, d))
    for j in range(d):
        xp = x.copy()
        xp[j] += fd_step
        jac[:, j] = (residual(xp) - g) / fd_step
    return jac


def solve_newton(
    residual: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    cfg: SolverConfig,
    residual_many: Callable[[np.ndarray], np.ndarray] | None = None,
) -> tuple[np.ndarray, int, float]:
    """Damped Newton on G(x) = 0 over flat real coordinates.

    The Jacobian is assembled column-by-column by forward differences
    (vectorized through residual_many when the caller can evaluate a batch
    of points at once).  Steps backtrack on the Armijo condition for the
    2-norm merit; a step that cannot make progress raises
    NonConvergenceError so callers can fall back to continuation.
    Iteration counting matches solve_fixed_point: one iteration per
    residual evaluation at an accepted point.
    """
    x = x0.astype(float, copy=True)
    g = residual(x)
    res = _max_abs(g)
    merit = float(np.linalg.norm(g))
    first_residual = res
    for it in range(1, cfg.max_iters + 1):
        if res <= cfg.tol:
            return x, it, res
        if not np.isfinite(res) or res > DIVERGENCE_FACTOR * max(first_residual, 1e-300):
            raise DivergenceDetectedError(it, res, first_residual)
        jac = _fd_jacobian(residual, x, g, cfg.newton_fd_step, residual_many)
        try:
            delta = np.linalg.solve(jac, g)
        except np.linalg.LinAlgError as exc:
            raise LinearSolveFailureError(f"singular Newton Jacobian: {exc}") from exc
        scale = 1.0
        accepted = False
        for _ in range(_MAX_BACKTRACKS + 1):
            x_new = x - scale * delta
            g_new = residual(x_new)
            merit_new = float(np.linalg.norm(g_new))
            if np.isfinite(merit_new) and (
                merit_new <= (1.0 - 1e-4 * scale) * merit or _max_abs(g_new) <= cfg.tol
            ):
                accepted = True
                break
            scale *= 0.5
        if not accepted:
            raise NonConvergenceError(it, res)
        x, g, merit, res = x_new, g_new, merit_new, _max_abs(g_new)
    if res <= cfg.tol:
        return x, cfg.max_iters, res
    raise NonConvergenceError(cfg.max_iters, res)


def solve_newton_continuation(
    residual_factory: Callable[[float], Callable[[np.ndarray], np.ndarray]],
    x0: np.ndarray,
    h: float,
    cfg: SolverConfig,
    residual_many_factory: Callable[[float], Callable[[np.ndarray], np.ndarray] | None]
    | None = None,
) -> tuple[np.ndarray, int, float]:
    """Newton at the target step size, with warm-started bisection in h.

    x0 solves the h=0 system exactly, so when the direct solve from x0
    fails the interval is bisected and each sub-step is solved from the
    previous solution (the continuation path of the stage existence
    argument).  The reported iteration count sums all sub-solves.
    """
    x = np.asarray(x0, dtype=float)
    total_iters = 0
    h_solved = 0.0
    pending = [float(h)]
    splits = 0
    res = 0.0
    while pending:
        h_try = pending[-1]
        many = residual_many_factory(h_try) if residual_many_factory else None
        try:
            x_new, iters, res = solve_newton(residual_factory(h_try), x, cfg, many)
        except (NonConvergenceError, DivergenceDetectedError) as exc:
            splits += 1
            if splits > 60:
                raise NonConvergenceError(total_iters + getattr(exc, "iters", 0), getattr(exc, "residual", np.inf))
            pending.append(0.5 * (h_solved + h_try))
            continue
        total_iters += iters
        x = x_new
        h_solved = h_try
        pending.pop()
    return x, total_iters, res


def pack_real(a: np.ndarray) -> np.ndarray:
    """Flatten a possibly complex array into real coordinates."""
    if np.iscomplexobj(a):
        return np.concatenate([a.real.ravel(), a.imag.ravel()])
    return np.asarray(a, dtype=float).ravel()


def unpack_real(v: np.ndarray, shape: tuple[int, ...], is_complex: bool) -> np.ndarray:
    """Inverse of pack_real for a known target shape."""
    if is_complex:
        half = v.size // 2
        return (v[:half] + 1j * v[half:]).reshape(shape)
    return v.reshape(shape)


def probe_batched(
    fn: Callable[[np.ndarray], np.ndarray],
    sample: np.ndarray,
    rtol: float = 1e-12,
) -> bool:
    """Whether fn broadcasts over a stacked leading axis.

    Evaluates fn on a 2-stack (the sample and a perturbed copy) and checks
    shape and agreement with per-item evaluation.  Used to pick the
    vectorized Jacobian-assembly path; any failure falls back to the loop.
    """
    try:
        perturbed = sample + 1e-8 * (1.0 + np.abs(sample))
        stacked = np.stack([sample, perturbed])
        out = fn(stacked)
        if not isinstance(out, np.ndarray) or out.shape != stacked.shape:
            return False
        ref0 = fn(sample)
        ref1 = fn(perturbed)
        atol = rtol * max(1.0, float(np.max(np.abs(ref0))), float(np.max(np.abs(ref1))))
        return bool(
            np.allclose(out[0], ref0, rtol=rtol, atol=atol)
            and np.allclose(out[1], ref1, rtol=rtol, atol=atol)
        )
    except Exception:
        return False
