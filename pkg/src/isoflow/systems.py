"""Benchmark systems: generalized rigid body, Brockett flow, Heisenberg
spin chain, and point vortices on the hyperbolic plane.

Each constructor returns a ready-made problem/field with its Hamiltonian,
invariants, and exact initial data.  Random initial data is always drawn
from a seeded uniform(0,1) generator so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CollisionProximityError
from .matrixcore import conjugate_transpose, spectrum_key
from .scheme import FlowProblem
from .sl2 import HypChainState, HypField, _L_SIGNS, l_inner
from .vec3 import Vec3Field

# |w_i ._L w_j| - 1 below this aborts a point-vortex evaluation
# (logarithm singularity of the interaction kernel).
COLLISION_THRESHOLD = 1e-12


# ---------------------------------------------------------------------------
# Generalized rigid body on so(n)


@dataclass(frozen=True)
class RigidBodySpec:
    """Free rigid body on so(n) with the banded inertia rule.

    The inertia divides entry (i, j) by d_min(i,j) where d = (1, ..., n/2,
    n/2, ..., 1); applying the row rule on the upper triangle and extending
    skew-symmetrically keeps I symmetric positive definite on so(n).
    """

    n: int = 10

    def __post_init__(self):
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError("n must be a positive even integer")


def rigid_body_inertia_coeffs(n: int) -> np.ndarray:
    d = np.array([i if i <= n // 2 else n + 1 - i for i in range(1, n + 1)], dtype=float)
    idx = np.minimum.outer(np.arange(n), np.arange(n))
    return d[idx]


def rigid_body_initial(n: int) -> np.ndarray:
    """Upper-triangular entries 1/10, extended skew-symmetrically."""
    w = np.triu(np.full((n, n), 0.1), k=1)
    return w - w.T


def rigid_body_problem(spec: RigidBodySpec) -> FlowProblem:
    """dW/dt = -[I^{-1} W, W] with H(W) = (1/2) Tr((I^{-1}W)^dagger W)."""
    n = spec.n
    coeffs = rigid_body_inertia_coeffs(n)

    def inertia_inverse(w):
        return w / coeffs

    def b_map(w):
        return -inertia_inverse(w)

    def hamiltonian(w):
        return 0.5 * float(np.real(np.trace(conjugate_transpose(inertia_inverse(w)) @ w)))

    key0 = spectrum_key(rigid_body_initial(n))

    def eigenvalue_drift(w):
        return float(np.max(np.abs(spectrum_key(w) - key0)))

    return FlowProblem(
        dim=n,
        b_map=b_map,
        hamiltonian=hamiltonian,
        structure_j=np.eye(n),
        invariant_fns={"hamiltonian": hamiltonian, "eigenvalue_drift": eigenvalue_drift},
    )


# ---------------------------------------------------------------------------
# Brockett double-bracket flow


@dataclass(frozen=True)
class BrockettSpec:
    """dW/dt = [[N, W], W] for self-adjoint W; diagonalizes W against N."""

    n: int = 10
    n_diagonal: tuple[float, ...] | None = None
    seed: int = 1234

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        diag = self.diagonal
        if len(diag) != self.n or not all(b > a for a, b in zip(diag, diag[1:])):
            raise ValueError("target diagonal must have strictly increasing entries")

    @property
    def diagonal(self) -> tuple[float, ...]:
        if self.n_diagonal is not None:
            return self.n_diagonal
        return tuple(float(k) for k in range(1, self.n + 1))


def brockett_initial(spec: BrockettSpec) -> np.ndarray:
    """Symmetrized matrix of seeded uniform(0,1) entries."""
    rng = np.random.default_rng(spec.seed)
    a = rng.uniform(0.0, 1.0, size=(spec.n, spec.n))
    return 0.5 * (a + a.T)


def offdiagonal_norm(w: np.ndarray) -> float:
    off = w - np.diag(np.diag(w))
    return float(np.linalg.norm(off))


def diag_sort_matches(w: np.ndarray, diagonal) -> bool:
    """Whether sorting diag(w) permutes indices the same way as the target."""
    return bool(
        np.array_equal(np.argsort(np.real(np.diag(w))), np.argsort(np.asarray(diagonal)))
    )


def brockett_problem(spec: BrockettSpec) -> FlowProblem:
    n_mat = np.diag(np.asarray(spec.diagonal, dtype=float))

    def b_map(w):
        return n_mat @ w - w @ n_mat

    key0 = spectrum_key(brockett_initial(spec))

    def eigenvalue_drift(w):
        return float(np.max(np.abs(spectrum_key(w) - key0)))

    def trace_nw(w):
        return float(np.real(np.trace(n_mat @ w)))

    return FlowProblem(
        dim=spec.n,
        b_map=b_map,
        invariant_fns={
            "offdiag_norm": offdiagonal_norm,
            "trace_nw": trace_nw,
            "eigenvalue_drift": eigenvalue_drift,
        },
    )


# ---------------------------------------------------------------------------
# Heisenberg spin chain


@dataclass(frozen=True)
class SpinChainSpec:
    """Periodic chain of N unit spins coupled to nearest neighbours."""

    n_particles: int = 100
    initial: str = "curve"  # "curve" or "random"
    seed: int = 0

    def __post_init__(self):
        if self.n_particles < 3:
            raise ValueError("chain needs at least 3 particles")
        if self.initial not in ("curve", "random"):
            raise ValueError("initial must be 'curve' or 'random'")


def spin_chain_curve(n: int) -> np.ndarray:
    """Equispaced samples of the closed spherical curve
    (cos(2 pi x^2) sin(2 pi x^3), sin(2 pi x^2) sin(2 pi x^3), cos(2 pi x^3)).
    """
    x = np.arange(n) / n
    a = 2.0 * np.pi * x**2
    b = 2.0 * np.pi * x**3
    return np.stack([np.cos(a) * np.sin(b), np.sin(a) * np.sin(b), np.cos(b)], axis=1)


def spin_chain_initial(spec: SpinChainSpec) -> np.ndarray:
    if spec.initial == "curve":
        return spin_chain_curve(spec.n_particles)
    rng = np.random.default_rng(spec.seed)
    w = rng.uniform(-1.0, 1.0, size=(spec.n_particles, 3))
    return w / np.linalg.norm(w, axis=1, keepdims=True)


def spin_chain_field(spec: SpinChainSpec) -> Vec3Field:
    """B_i = w_{i-1} + w_{i+1} (periodic), H = sum_i w_i . w_{i+1}."""

    def b_fn(w):
        return np.roll(w, 1, axis=-2) + np.roll(w, -1, axis=-2)

    def hamiltonian(w):
        return float(np.sum(w * np.roll(w, -1, axis=-2)))

    return Vec3Field(b_fn=b_fn, hamiltonian=hamiltonian)


def total_spin(w: np.ndarray) -> np.ndarray:
    return np.sum(w, axis=-2)


# ---------------------------------------------------------------------------
# Point vortices on the hyperbolic plane


@dataclass(frozen=True)
class PointVortexSpec:
    """N vortices on the hyperboloid w ._L w = -1 with strengths Gamma."""

    positions: tuple[tuple[float, float, float], ...]
    strengths: tuple[float, ...]
    casimir_tol: float = 1e-10

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        gam = np.asarray(self.strengths, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise ValueError(f"positions must be (N, 3), got {pos.shape}")
        if gam.shape != (pos.shape[0],) or np.any(gam == 0.0):
            raise ValueError("need one nonzero strength per vortex")
        cas = l_inner(pos, pos)
        if np.max(np.abs(cas + 1.0)) > self.casimir_tol:
            raise ValueError(
                f"initial positions must satisfy w ._L w = -1 to {self.casimir_tol:g}; "
                f"worst violation {np.max(np.abs(cas + 1.0)):.3e}"
            )

    @property
    def n_vortices(self) -> int:
        return len(self.positions)


def equilateral_vortex_spec() -> PointVortexSpec:
    """Three-vortex equilateral relative equilibrium (digits as published)."""
    return PointVortexSpec(
        positions=(
            (-0.5000, 0.8660, 1.4142),
            (-0.5000, -0.8660, 1.4142),
            (1.0000, -0.0000, 1.4142),
        ),
        strengths=(0.5317, 0.0761, 1.0000),
        casimir_tol=5e-3,  # positions are printed to 4-5 significant digits
    )


def geodesic_vortex_spec() -> PointVortexSpec:
    """Three-vortex geodesic relative equilibrium (digits as published)."""
    return PointVortexSpec(
        positions=(
            (2.6000, 0.1923, 2.7923),
            (4.0000, 0.1250, 4.1250),
            (3.0000, 0.1667, 3.1667),
        ),
        strengths=(0.0990, 0.8091, 1.0000),
        casimir_tol=5e-3,
    )


def point_vortex_state(spec: PointVortexSpec) -> HypChainState:
    return HypChainState(
        particles=np.asarray(spec.positions, dtype=float),
        strengths=np.asarray(spec.strengths, dtype=float),
    )


def _pair_inners(w: np.ndarray) -> np.ndarray:
    """c_ij = w_i ._L w_j over the last two axes; shape (..., N, N)."""
    return np.einsum("...ik,...jk->...ij", w, w * _L_SIGNS)


def point_vortex_field(spec: PointVortexSpec) -> HypField:
    """Interaction field, Hamiltonian, and momentum for the vortex system.

        dw_i/dt = 2L(B_i x w_i),  B_i = (1/pi) sum_{j != i} Gamma_j w_j / (c_ij^2 - 1)
        H = -(1/4 pi) sum_{i != j} Gamma_i Gamma_j log((c_ij + 1)/(c_ij - 1))
        M = sum_i Gamma_i w_i

    with c_ij = w_i ._L w_j.  Any pair with |c_ij| - 1 < 1e-12 aborts the
    evaluation with CollisionProximityError.
    """
    gam = np.asarray(spec.strengths, dtype=float)
    n = spec.n_vortices
    eye = np.eye(n, dtype=bool)

    def _guarded_inners(w):
        c = _pair_inners(w)
        off = np.abs(c[..., ~eye])
        if off.size and float(np.min(off)) - 1.0 < COLLISION_THRESHOLD:
            raise CollisionProximityError(
                f"vortex pair inner product within {COLLISION_THRESHOLD:g} of the "
                f"interaction singularity (min |c| = {float(np.min(off)):.12f})"
            )
        return c

    def b_fn(w):
        c = _guarded_inners(w)
        denom = c * c - 1.0
        denom = np.where(eye, np.inf, denom)
        return np.einsum("...ij,j,...jk->...ik", 1.0 / denom, gam, w) / np.pi

    def hamiltonian(w):
        c = _guarded_inners(w)
        ratio = np.where(eye, 1.0, (c + 1.0) / (c - 1.0))
        pair_energy = np.outer(gam, gam) * np.log(ratio)
        return float(-np.sum(pair_energy) / (4.0 * np.pi))

    def momentum(w):
        return np.einsum("i,ik->k", gam, w)

    return HypField(b_fn=b_fn, hamiltonian=hamiltonian, momentum=momentum)
