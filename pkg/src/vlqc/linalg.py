"""Dense complex linear algebra for small state vectors and Hermitian operators.

Everything operates on plain 1-d/2-d numpy arrays of dtype complex128 at desk
scale (dimensions up to a few thousand). Operations are pure and never mutate
their inputs, so values can be shared freely across threads.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

# Relative residual norm at or below this counts as linear dependence.
DEPENDENCE_TOL = 1e-9
# Vector norms at or below this are treated as zero.
ZERO_TOL = 1e-12
# Accepted deviation of a unit vector's norm from 1.
UNIT_TOL = 1e-12


def as_state(v) -> np.ndarray:
    """Coerce to a finite, nonempty 1-d complex128 array."""
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("expected a nonempty 1-d vector")
    if not np.isfinite(arr).all():
        raise ValueError("vector contains NaN or Inf")
    return arr


def inner(u, v) -> complex:
    """<u|v>, conjugate-linear in the first argument."""
    u = as_state(u)
    v = as_state(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    return complex(np.vdot(u, v))


def norm(v) -> float:
    return float(np.linalg.norm(as_state(v)))


def is_unit(v, tol: float = UNIT_TOL) -> bool:
    return abs(float(np.linalg.norm(v)) - 1.0) <= tol


def normalize(v) -> np.ndarray:
    """v / ||v||; rejects near-zero input."""
    v = as_state(v)
    n = float(np.linalg.norm(v))
    if n <= ZERO_TOL:
        raise ValueError("cannot normalize a near-zero vector")
    return v / n


def gram_schmidt(vectors: Iterable, tol: float = DEPENDENCE_TOL) -> list[np.ndarray]:
    """In-order Gram-Schmidt orthonormalization.

    The first output is the normalized first input, and each later output is
    the normalized residual of its input against the basis built so far, so
    signs and phases are inherited from the inputs; no extra canonicalization
    is applied. Raises ValueError when an input's relative residual norm falls
    to ``tol`` or below (linear dependence).
    """
    basis: list[np.ndarray] = []
    for pos, v in enumerate(vectors):
        v = as_state(v)
        residual = v.astype(complex, copy=True)
        for w in basis:
            residual -= np.vdot(w, residual) * w
        rnorm = float(np.linalg.norm(residual))
        if rnorm <= tol * float(np.linalg.norm(v)):
            raise ValueError(
                f"vector at position {pos} is linearly dependent on its predecessors"
            )
        basis.append(residual / rnorm)
    return basis


def in_span(v, basis: Sequence[np.ndarray], tol: float = DEPENDENCE_TOL) -> bool:
    """Whether v lies in the span of an orthonormal basis, up to relative tol."""
    v = as_state(v)
    residual = v.astype(complex, copy=True)
    for w in basis:
        residual -= np.vdot(w, v) * w
    return float(np.linalg.norm(residual)) <= tol * float(np.linalg.norm(v))


def hermitian_eigenvalues(m, herm_tol: float = 1e-10) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, in descending order.

    Eigenvalues lying within 1e-10 outside [0, 1] are clamped to the boundary
    so that density matrices survive floating-point noise; eigenvalues well
    outside that band are returned untouched.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError("expected a nonempty square matrix")
    if not np.isfinite(m).all():
        raise ValueError("matrix contains NaN or Inf")
    deviation = float(np.max(np.abs(m - m.conj().T)))
    if deviation > herm_tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {deviation:.3e})")
    eigs = np.linalg.eigvalsh(m)[::-1].copy()
    eigs[(eigs < 0.0) & (eigs >= -1e-10)] = 0.0
    eigs[(eigs > 1.0) & (eigs <= 1.0 + 1e-10)] = 1.0
    return eigs
