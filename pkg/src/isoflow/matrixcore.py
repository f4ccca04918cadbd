"""Dense square-matrix arithmetic and Lie-algebraic primitives.

All operations are pure functions on numpy arrays (real or complex dtype);
matrices are never mutated in place, so values are safe to share across
threads.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, EigensolverError, SingularMatrixError

# Structure detection threshold for spectrum_key, relative to matrix scale.
_STRUCTURE_RTOL = 1e-10


def as_square_matrix(entries, dim: int | None = None) -> np.ndarray:
    """Validate and return a dense n-by-n matrix as a numpy array.

    Accepts anything np.asarray understands.  Real input stays real,
    everything else is promoted to complex128.  Raises on non-square
    shapes, a dim mismatch, or non-finite entries.
    """
    a = np.asarray(entries)
    if a.dtype.kind not in "fc":
        a = a.astype(complex if a.dtype.kind == "c" else float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise DimensionMismatchError(f"expected dim {dim}, got {a.shape[0]}")
    finite = np.isfinite(a.real) & np.isfinite(a.imag) if a.dtype.kind == "c" else np.isfinite(a)
    if not finite.all():
        raise ValueError("matrix entries must be finite")
    return a.copy()


def identity(n: int, like: np.ndarray | None = None) -> np.ndarray:
    dtype = like.dtype if like is not None else float
    return np.eye(n, dtype=dtype)


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-2:] != b.shape[-2:]:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix commutator ab - ba."""
    _check_same_dim(a, b)
    return a @ b - b @ a


def conjugate_transpose(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose, acting on the last two axes."""
    return np.conj(np.swapaxes(a, -1, -2))


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Frobenius inner product Tr(a^dagger b)."""
    _check_same_dim(a, b)
    return complex(np.trace(conjugate_transpose(a) @ b))


def cayley(a: np.ndarray) -> np.ndarray:
    """Cayley transform (Id - a)(Id + a)^{-1}.

    (Id - a) and (Id + a) commute, so the product is computed as a single
    LU solve against (Id + a); a singular factor raises SingularMatrixError
    with a condition estimate.
    """
    n = a.shape[-1]
    eye = identity(n, like=a)
    try:
        return np.linalg.solve(eye + a, eye - a)
    except np.linalg.LinAlgError as exc:
        cond = None
        try:
            cond = float(np.linalg.cond(eye + a))
        except np.linalg.LinAlgError:
            pass
        raise SingularMatrixError("Cayley transform: Id + a is singular", cond) from exc


def spectrum_key(a: np.ndarray) -> np.ndarray:
    """Canonical spectrum: eigenvalues sorted lexicographically by (re, im).

    Hermitian and skew-Hermitian inputs (detected to 1e-10 relative to the
    matrix scale) go through the symmetric eigensolver, which pins the
    real/imaginary parts exactly and keeps the sort order stable under
    round-off; plain (re, im) sorting of a general eigensolver's output
    would otherwise shuffle pure-imaginary pairs by noise in the real parts.
    """
    a = np.asarray(a)
    ct = conjugate_transpose(a)
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    tol = _STRUCTURE_RTOL * scale
    try:
        if np.max(np.abs(a - ct)) <= tol:
            eigs = np.linalg.eigvalsh((a + ct) / 2).astype(complex)
        elif np.max(np.abs(a + ct)) <= tol:
            eigs = 1j * np.linalg.eigvalsh(-1j * (a - ct) / 2)
        else:
            eigs = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed: {exc}") from exc
    order = np.lexsort((eigs.imag, eigs.real))
    return eigs[order]


def in_quadratic_algebra(w: np.ndarray, j: np.ndarray, tol: float) -> bool:
    """Whether w^dagger j + j w vanishes to the given max-entry tolerance."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    _check_same_dim(w, j)
    return bool(np.max(np.abs(conjugate_transpose(w) @ j + j @ w)) <= tol)
