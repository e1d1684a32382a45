"""Small dense linear algebra used throughout the package.

Vectors are 1-d float arrays. A basis is a 2-d array whose rows are
orthonormal vectors; an empty basis has shape ``(0, n)`` so that it still
remembers its ambient dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-9
NEAR_ZERO = 1e-12


class NoCommonSphere(ValueError):
    """Raised when points do not lie on a common sphere within tolerance."""

    def __init__(self, residual: float):
        super().__init__(f"points do not share a sphere (residual {residual:.3g})")
        self.residual = residual


def as_vectors(vectors, dim: int | None = None) -> np.ndarray:
    """Coerce a sequence of vectors into a 2-d float array.

    ``dim`` fixes the column count for empty input and is checked otherwise.
    """
    try:
        arr = np.asarray(vectors, dtype=float)
    except ValueError as exc:
        raise ValueError("vectors must share one dimension") from exc
    if arr.size == 0 and arr.ndim < 2:
        return np.zeros((0, dim or 0))
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError("vectors must share one dimension")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"expected vectors of dimension {dim}, got {arr.shape[1]}")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.flags.writeable = False
    return arr


def gram_schmidt(vectors, tol: float = DEFAULT_TOL, dim: int | None = None) -> np.ndarray:
    """Orthonormal basis of the span of ``vectors``, processed in order.

    A vector is dropped when its residual after projecting out the basis
    built so far is at most ``tol`` times the largest input norm, or at most
    ``tol`` when every input norm is below 1e-12. The number of rows
    returned is the numerical rank.

    Instead of looping over every vector, each pass projects all remaining
    vectors at once and promotes the first one whose residual clears the
    threshold. Everything skipped before it would have been dropped by the
    sequential procedure too, so the result is the same while the Python loop
    runs at most ``rank + 1`` times.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    V = as_vectors(vectors, dim)
    count, n = V.shape
    if count == 0:
        return np.zeros((0, n))
    scale = np.linalg.norm(V, axis=1).max()
    # inputs that are all rounding noise are measured on an absolute scale
    threshold = tol * (scale if scale > NEAR_ZERO else 1.0)

    residual = V.copy()
    basis: list[np.ndarray] = []
    start = 0
    while start < count and len(basis) < n:
        res_norms = np.linalg.norm(residual[start:], axis=1)
        above = np.flatnonzero(res_norms > threshold)
        if above.size == 0:
            break
        j = start + int(above[0])
        q = residual[j] / res_norms[above[0]]
        # one re-orthogonalisation pass keeps the basis orthonormal to ~eps
        for b in basis:
            q = q - (q @ b) * b
        q = q / np.linalg.norm(q)
        basis.append(q)
        tail = residual[j + 1:]
        tail -= np.outer(tail @ q, q)
        start = j + 1
    if not basis:
        return np.zeros((0, n))
    return np.array(basis)


@dataclass(frozen=True)
class AffineFrame:
    """An affine subspace ``base + span(basis)`` with an orthonormal basis."""

    base: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        base = _frozen(np.ravel(self.base))
        basis = _frozen(as_vectors(self.basis, base.shape[0]))
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "basis", basis)

    @property
    def ambient_dim(self) -> int:
        return self.base.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


def affine_frame(points, tol: float = DEFAULT_TOL) -> AffineFrame:
    """Smallest affine subspace containing ``points``, based at the first point."""
    P = as_vectors(points)
    if P.shape[0] == 0:
        raise ValueError("affine_frame needs at least one point")
    basis = gram_schmidt(P[1:] - P[0], tol, dim=P.shape[1])
    return AffineFrame(P[0], basis)


def _check_dims(a: np.ndarray, n: int) -> None:
    if a.shape[-1] != n:
        raise ValueError(f"dimension mismatch: {a.shape[-1]} vs {n}")


def project(p, frame: AffineFrame) -> np.ndarray:
    """Orthogonal projection of ``p`` (a point or rows of points) onto ``frame``."""
    p = np.asarray(p, dtype=float)
    _check_dims(p, frame.ambient_dim)
    offset = p - frame.base
    return frame.base + (offset @ frame.basis.T) @ frame.basis


def reflect(p, center) -> np.ndarray:
    """Point reflection of ``p`` through ``center``."""
    p = np.asarray(p, dtype=float)
    center = np.asarray(center, dtype=float)
    _check_dims(p, center.shape[-1])
    return 2.0 * center - p


def bases_orthogonal(a, b, tol: float = DEFAULT_TOL) -> bool:
    """True when every inner product between rows of ``a`` and ``b`` is within tol."""
    return cross_inner(a, b) <= tol


def cross_inner(a, b) -> float:
    """Largest absolute inner product between the rows of two bases."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise ValueError("bases must share an ambient dimension")
    if a.shape[0] == 0 or b.shape[0] == 0:
        return 0.0
    return float(np.abs(a @ b.T).max())


def circumcenter(points, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Center and radius of the sphere through ``points`` inside their affine hull.

    Solves ``2 <p_j - p_1, c> = |p_j|^2 - |p_1|^2`` in hull coordinates by
    least squares, then checks that every point sits at the same distance.
    Raises :class:`NoCommonSphere` when the spread exceeds ``tol``.
    """
    P = as_vectors(points)
    if P.shape[0] == 0:
        raise ValueError("circumcenter needs at least one point")
    frame = affine_frame(P, tol)
    if frame.dim == 0:
        return P[0].copy(), 0.0
    Q = (P[1:] - P[0]) @ frame.basis.T
    rhs = 0.5 * np.einsum("ij,ij->i", Q, Q)
    x, *_ = np.linalg.lstsq(Q, rhs, rcond=None)
    center = P[0] + x @ frame.basis
    dists = np.linalg.norm(P - center, axis=1)
    radius = float(dists[0])
    spread = float(np.abs(dists - radius).max())
    if spread > tol:
        raise NoCommonSphere(spread)
    return center, radius


def regular_simplex(vertices: int, edge: float = 1.0) -> np.ndarray:
    """Vertices of a regular simplex centred at the origin of R^(vertices-1)."""
    if vertices < 1:
        raise ValueError("a simplex needs at least one vertex")
    if edge == 0:
        return np.zeros((vertices, vertices - 1))
    E = (edge / np.sqrt(2.0)) * (np.eye(vertices) - 1.0 / vertices)
    basis = gram_schmidt(E[1:] - E[0], dim=vertices)
    return E @ basis.T


def complete_basis(basis, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Extend orthonormal rows to an orthonormal basis of the whole space."""
    basis = as_vectors(basis)
    n = basis.shape[1]
    extra = gram_schmidt(np.vstack([basis, np.eye(n)]), tol)
    return extra


def aligning_rotation(source: Sequence, target: Sequence, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal matrix taking each source basis onto the matching target basis.

    ``source`` and ``target`` are lists of bases with matching shapes; the
    bases within each list must be mutually orthogonal. Row ``j`` of the
    ``i``-th source basis is sent to row ``j`` of the ``i``-th target basis,
    and the orthogonal complements are matched arbitrarily. When there is a
    complement to play with, the result is made a proper rotation.
    """
    if len(source) != len(target):
        raise ValueError("source and target must list the same number of bases")
    src = [np.asarray(b, dtype=float) for b in source]
    tgt = [np.asarray(b, dtype=float) for b in target]
    if not src:
        raise ValueError("need at least one basis to infer the dimension")
    n = src[0].shape[1]
    for s, t in zip(src, tgt):
        if s.ndim != 2 or t.ndim != 2 or s.shape != t.shape or s.shape[1] != n:
            raise ValueError("source and target bases must have matching shapes")
    S = np.vstack(src)
    T = np.vstack(tgt)
    for stacked in (S, T):
        if stacked.shape[0] and np.abs(stacked @ stacked.T - np.eye(stacked.shape[0])).max() > tol:
            raise ValueError("basis families must be orthonormal and mutually orthogonal")
    S_full = complete_basis(S, tol)
    T_full = complete_basis(T, tol)
    U = T_full.T @ S_full
    if S.shape[0] < n and np.linalg.det(U) < 0:
        T_full[-1] *= -1.0
        U = T_full.T @ S_full
    return U
