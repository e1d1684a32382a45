"""Orthocentric simplices and systems via lambda coordinates.

A point family is an orthocentric system when there are weights with
``|x_i - x_j|^2 = lam_i + lam_j`` for all pairs and ``sum(1 / lam_i) = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .linalg import DEFAULT_TOL, affine_frame, as_vectors

ZERO_LAMBDA = 1e-12


@dataclass(frozen=True)
class LambdaSolution:
    lambdas: np.ndarray
    residual: float
    reciprocal_sum: float
    degenerate: bool = False


def solve_lambdas(points) -> LambdaSolution:
    """Least-squares weights for the pair-sum equations.

    ``residual`` is the largest absolute misfit over all pairs. Weights of
    magnitude at most 1e-12 are left out of the reciprocal sum and flagged as
    ``degenerate``.
    """
    X = as_vectors(points)
    count = X.shape[0]
    if count < 3:
        raise ValueError("solve_lambdas needs at least three points")
    pairs = list(combinations(range(count), 2))
    A = np.zeros((len(pairs), count))
    b = np.empty(len(pairs))
    for row, (i, j) in enumerate(pairs):
        A[row, i] = A[row, j] = 1.0
        diff = X[i] - X[j]
        b[row] = diff @ diff
    # normal matrix is (count - 2) I + J, always invertible here
    lam = np.linalg.solve(A.T @ A, A.T @ b)
    residual = float(np.abs(A @ lam - b).max())
    live = np.abs(lam) > ZERO_LAMBDA
    reciprocal = float(np.sum(1.0 / lam[live]))
    return LambdaSolution(lam, residual, reciprocal, bool((~live).any()))


def affine_rank(points, tol: float = DEFAULT_TOL) -> int:
    return affine_frame(points, tol).dim


def is_orthocentric_system(points, tol: float = DEFAULT_TOL) -> bool:
    X = as_vectors(points)
    if X.shape[0] < 3 or X.shape[0] != affine_rank(X, tol) + 2:
        raise ValueError("an orthocentric system has exactly affine rank + 2 points")
    return orthocentric_verdict(X, tol)[0]


def orthocentric_verdict(points, tol: float = DEFAULT_TOL) -> tuple[bool, LambdaSolution]:
    """Lambda test without the count/rank precondition.

    The reciprocal sum is compared against ``tol`` times the size of its
    terms (at least 1): a weight near zero has a huge reciprocal, and its
    rounding error would otherwise swamp an absolute test.
    """
    sol = solve_lambdas(points)
    lam = sol.lambdas
    pair_sums = lam[:, None] + lam[None, :]
    np.fill_diagonal(pair_sums, np.inf)
    live = np.abs(lam) > ZERO_LAMBDA
    scale = max(1.0, float(np.sum(1.0 / np.abs(lam[live]))))
    ok = sol.residual <= tol and abs(sol.reciprocal_sum) <= tol * scale and pair_sums.min() > -tol
    return bool(ok), sol


def orthocenter(simplex, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Common point of the altitudes of a simplex, searched inside its hull.

    Each altitude through vertex ``i`` is orthogonal to the opposite face, so
    the orthocenter ``h`` satisfies ``<h - x_i, x_j - x_l> = 0`` for all
    ``j, l != i``. Raises ``ValueError`` when those conditions are inconsistent.
    """
    X = as_vectors(simplex)
    count = X.shape[0]
    if count < 3:
        raise ValueError("orthocenter needs at least three vertices")
    frame = affine_frame(X, tol)
    if frame.dim != count - 1:
        raise ValueError("simplex vertices must be affinely independent")
    rows = []
    rhs = []
    for i in range(count):
        others = [j for j in range(count) if j != i]
        anchor = X[others[0]]
        for j in others[1:]:
            edge = X[j] - anchor
            rows.append(edge @ frame.basis.T)
            rhs.append(edge @ (X[i] - frame.base))
    A = np.array(rows)
    y, *_ = np.linalg.lstsq(A, np.array(rhs), rcond=None)
    misfit = float(np.abs(A @ y - np.array(rhs)).max())
    if misfit > tol:
        raise ValueError(f"altitudes do not meet (residual {misfit:.3g})")
    return frame.base + y @ frame.basis


def scale_to_spacing(points, slack: float = 1.0, min_class_dims=None, tol: float = DEFAULT_TOL):
    """Scale an orthocentric system so that it becomes the centers of a spacing.

    Returns ``(alpha, spacing)``. The scale is the largest one allowed by the
    positive weights and the diameter, shrunk by ``slack``; radii follow from
    ``r_i^2 = 1/2 - alpha^2 lam_i``. Each positive-radius class gets
    ``min_class_dims[i]`` fresh coordinate axes (default 1); zero-radius
    classes get none whatever is requested. Centers keep their original
    coordinates, so the result is maximal when the input spans its ambient
    space and every positive class has one axis.
    """
    from .analytic import AnalyticSpacing, SphereClass

    X = as_vectors(points)
    if not 0 < slack <= 1:
        raise ValueError("slack must lie in (0, 1]")
    ok, sol = orthocentric_verdict(X, tol)
    if not ok or X.shape[0] != affine_rank(X, tol) + 2:
        raise ValueError("points are not an orthocentric system")
    lam = sol.lambdas
    if sol.degenerate:
        raise ValueError("a lambda coordinate vanishes; the system is degenerate")
    positive = lam[lam > 0]
    diffs = X[:, None, :] - X[None, :, :]
    diameter_sq = float(np.einsum("ijk,ijk->ij", diffs, diffs).max())
    bounds = [1.0 / diameter_sq]
    if positive.size:
        bounds.append(float((1.0 / (2.0 * positive)).min()))
    alpha_sq = slack * min(bounds)
    alpha = float(np.sqrt(alpha_sq))

    r_sq = 0.5 - alpha_sq * lam
    r_sq[np.abs(r_sq) <= ZERO_LAMBDA] = 0.0
    if (r_sq < 0).any():
        raise ValueError("scaling produced a negative squared radius")
    radii = np.sqrt(r_sq)
    assert (r_sq[:, None] + r_sq[None, :])[~np.eye(len(r_sq), dtype=bool)].max() <= 1 + tol

    if min_class_dims is None:
        min_class_dims = [1] * len(radii)
    if len(min_class_dims) != len(radii):
        raise ValueError("min_class_dims must give one entry per point")
    dims = [int(d) if r > 0 else 0 for d, r in zip(min_class_dims, radii)]
    if any(r > 0 and d < 1 for r, d in zip(radii, dims)):
        raise ValueError("every positive-radius class needs at least one dimension")

    n0 = X.shape[1]
    n = n0 + sum(dims)
    classes = []
    offset = n0
    for x, r, d in zip(X, radii, dims):
        center = np.zeros(n)
        center[:n0] = alpha * x
        basis = np.zeros((d, n))
        basis[np.arange(d), offset + np.arange(d)] = 1.0
        offset += d
        classes.append(SphereClass(center, float(r), basis))
    return alpha, AnalyticSpacing(n, tuple(classes))
