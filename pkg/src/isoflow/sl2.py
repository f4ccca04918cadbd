"""Hyperbolic midpoint method on sl(2,R)* in (R^3, x_L) coordinates.

Traceless real 2x2 matrices are identified with R^3 via

    [[x, y+z], [y-z, -x]]  <->  (x, y, z),

a Lie algebra isomorphism onto (R^3, x_L) with a x_L b = 2L(a x b),
L = diag(1, 1, -1).  The coadjoint orbits are the level sets of the
Casimir w ._L w = x^2 + y^2 - z^2, which the scheme preserves to solver
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatchError
from .solvers import (
    SolverConfig,
    SolverMethod,
    StepInfo,
    probe_batched,
    solve_fixed_point,
    solve_newton_continuation,
)

DEFAULT_SOLVER = SolverConfig()

L = np.diag([1.0, 1.0, -1.0])

_TRACE_TOL = 1e-12


def vec_to_sl2(v) -> np.ndarray:
    """(x, y, z) -> [[x, y+z], [y-z, -x]]."""
    x, y, z = np.asarray(v, dtype=float).reshape(3)
    return np.array([[x, y + z], [y - z, -x]])


def sl2_to_vec(w) -> np.ndarray:
    """Inverse identification; requires a real traceless 2x2 matrix."""
    w = np.asarray(w)
    if w.shape != (2, 2):
        raise DimensionMismatchError(f"expected a 2x2 matrix, got shape {w.shape}")
    if np.iscomplexobj(w):
        if np.max(np.abs(w.imag)) > _TRACE_TOL:
            raise ValueError("matrix must be real")
        w = w.real
    if abs(w[0, 0] + w[1, 1]) > _TRACE_TOL:
        raise ValueError(f"matrix must be traceless, trace = {w[0, 0] + w[1, 1]:.3e}")
    return np.array([w[0, 0], 0.5 * (w[0, 1] + w[1, 0]), 0.5 * (w[0, 1] - w[1, 0])])


def l_inner(a, b) -> np.ndarray:
    """Hyperbolic inner product a . (L b), acting on the last axis."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2]


_L_SIGNS = np.array([1.0, 1.0, -1.0])


def l_product(a, b) -> np.ndarray:
    """Hyperbolic bracket a x_L b = -2 L (a x b) = 2 (La) x (Lb).

    This is the exact coordinate image of the sl(2,R) commutator under the
    identification above: vec_to_sl2(a x_L b) == [vec_to_sl2(a),
    vec_to_sl2(b)].  (Expanding the commutator symbolically gives the
    -2L(a x b) sign.)  Acts on the last axis.
    """
    return -2.0 * np.cross(a, b) * _L_SIGNS


def m_correction(a, b, c) -> np.ndarray:
    """Trilinear correction whose diagonal M(beta, w, beta) is the
    coordinate image of the matrix product B W B.

    Built from the entry coordinates (p, q) = product entries (0,0), (0,1)
    and (r, s) their lower companions; the (y, z) components are recovered
    from the off-diagonal entries as half sum/difference.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2]
    b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2]
    c1, c2, c3 = c[..., 0], c[..., 1], c[..., 2]
    p = a1 * b1 + (b2 - b3) * (a2 + a3)
    q = b1 * (a2 + a3) - a1 * (b2 + b3)
    r = b1 * (a2 - a3) - a1 * (b2 - b3)
    s = a1 * b1 + (b2 + b3) * (a2 - a3)
    m1 = c1 * p - (c2 - c3) * q
    upper = c1 * q + (c2 + c3) * p
    lower = c1 * r + (c2 - c3) * s
    return np.stack([m1, 0.5 * (upper + lower), 0.5 * (upper - lower)], axis=-1)


@dataclass
class HypChainState:
    """N hyperbolic particles with vortex strengths Gamma_i != 0."""

    particles: np.ndarray
    strengths: np.ndarray

    def __post_init__(self):
        self.particles = np.asarray(self.particles, dtype=float)
        self.strengths = np.asarray(self.strengths, dtype=float)
        if self.particles.ndim != 2 or self.particles.shape[1] != 3:
            raise DimensionMismatchError(
                f"expected (N, 3) particles, got shape {self.particles.shape}"
            )
        if self.strengths.shape != (self.particles.shape[0],):
            raise DimensionMismatchError("strengths length must match particle count")
        if np.any(self.strengths == 0.0):
            raise ValueError("vortex strengths must be nonzero")

    @property
    def n_particles(self) -> int:
        return self.particles.shape[0]

    def casimirs(self) -> np.ndarray:
        return l_inner(self.particles, self.particles)


@dataclass
class HypField:
    """Coefficient map over particle coordinates, plus conserved evaluators."""

    b_fn: Callable[[np.ndarray], np.ndarray]
    hamiltonian: Callable[[np.ndarray], float] | None = None
    momentum: Callable[[np.ndarray], np.ndarray] | None = None


def _hyperbolic_core(
    b_fn: Callable[[np.ndarray], np.ndarray],
    w_k: np.ndarray,
    h: float,
    cfg: SolverConfig,
) -> tuple[np.ndarray, np.ndarray, int, float]:
    """Solve the sl(2,R) stage equation and emit the update.

        w_k     = w~ + (h/2) 2L(w~ x B(w~)) - (h^2/4) M(B, w~, B)
        w_{k+1} = w~ - (h/2) 2L(w~ x B(w~)) - (h^2/4) M(B, w~, B)
    """
    last: dict = {"x": None, "b": None}

    def eval_b(x):
        b = b_fn(x)
        last["x"] = x
        last["b"] = b
        return b

    def update_factory(h_cur):
        def update(x):
            b = eval_b(x)
            return w_k - 0.5 * h_cur * l_product(x, b) + 0.25 * h_cur * h_cur * m_correction(b, x, b)

        return update

    if cfg.method is SolverMethod.FIXED_POINT:
        w_tilde, iters, res = solve_fixed_point(update_factory(h), w_k, cfg)
    else:
        shape = w_k.shape

        def residual_factory(h_cur):
            update = update_factory(h_cur)

            def residual(vec):
                x = vec.reshape(shape)
                return (x - update(x)).ravel()

            return residual

        residual_many_factory = None
        if probe_batched(b_fn, w_k):

            def residual_many_factory(h_cur):
                def residual_many(rows):
                    xs = rows.reshape((rows.shape[0],) + shape)
                    bs = b_fn(xs)
                    fx = (
                        w_k
                        - 0.5 * h_cur * l_product(xs, bs)
                        + 0.25 * h_cur * h_cur * m_correction(bs, xs, bs)
                    )
                    return (xs - fx).reshape(rows.shape[0], -1)

                return residual_many

        vec, iters, res = solve_newton_continuation(
            residual_factory, w_k.ravel(), h, cfg, residual_many_factory
        )
        w_tilde = vec.reshape(shape)

    if last["x"] is not w_tilde and not np.array_equal(last["x"], w_tilde):
        last["b"] = b_fn(w_tilde)
    b = last["b"]
    quad = 0.25 * h * h * m_correction(b, w_tilde, b)
    w_next = w_tilde - 0.5 * h * l_product(w_tilde, b) - quad
    return w_next, w_tilde, iters, res


def step_hyperbolic_midpoint(
    field: HypField | Callable[[np.ndarray], np.ndarray],
    state: HypChainState,
    h: float,
    cfg: SolverConfig = DEFAULT_SOLVER,
) -> HypChainState:
    """One hyperbolic-midpoint step; strengths are carried unchanged."""
    b_fn = field.b_fn if isinstance(field, HypField) else field
    w_next, _, _, _ = _hyperbolic_core(b_fn, state.particles, h, cfg)
    return HypChainState(particles=w_next, strengths=state.strengths)


def make_stepper(
    field: HypField | Callable[[np.ndarray], np.ndarray],
    h: float,
    cfg: SolverConfig = DEFAULT_SOLVER,
) -> Callable[[np.ndarray], tuple[np.ndarray, StepInfo]]:
    """Adapter on raw particle arrays for the diagnostics layer."""
    b_fn = field.b_fn if isinstance(field, HypField) else field

    def stepper(particles):
        w_next, _, iters, res = _hyperbolic_core(b_fn, particles, h, cfg)
        return w_next, StepInfo(iters, res)

    return stepper
