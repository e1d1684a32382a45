"""Extent algebra and gluing of two spacings into orthogonal blocks.

All closed forms take squared extents, which is how they arise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import AnalyticSpacing, SphereClass, extent, hull_basis, validate
from .linalg import DEFAULT_TOL


@dataclass(frozen=True)
class GlueVerdict:
    glueable: bool
    extent_sum_sq: float
    min_ambient_dim: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.glueable

    def to_json(self) -> dict:
        out = {
            "glueable": self.glueable,
            "extent_sum_sq": self.extent_sum_sq if math.isfinite(self.extent_sum_sq) else None,
        }
        if self.min_ambient_dim is not None:
            out["min_ambient_dim"] = self.min_ambient_dim
        if self.reason:
            out["reason"] = self.reason
        return out


def glued_extent(a_sq: float, b_sq: float) -> float:
    """Extent of the gluing of spacings with squared extents ``a_sq`` and ``b_sq``."""
    if a_sq < 0 or b_sq < 0:
        raise ValueError("squared extents must be nonnegative")
    if a_sq + b_sq >= 1:
        raise ValueError("squared extents must sum to less than 1")
    return math.sqrt((1 - 4 * a_sq * b_sq) / (4 * (1 - a_sq - b_sq)))


def glued_glue_site(cA, cB, a_sq: float, b_sq: float) -> np.ndarray:
    """Glue site of the gluing, given the embedded glue sites of both parts."""
    if a_sq + b_sq >= 1:
        raise ValueError("squared extents must sum to less than 1")
    cA = np.asarray(cA, dtype=float)
    cB = np.asarray(cB, dtype=float)
    delta = (a_sq - b_sq) / (2 * (1 - a_sq - b_sq))
    return 0.5 * (cA + cB) + delta * (cA - cB)


def simplex_circumradius(edge: float, vertices: int) -> float:
    """Circumradius of a regular simplex with the given number of vertices."""
    if vertices < 1:
        raise ValueError("a simplex needs at least one vertex")
    if edge < 0:
        raise ValueError("edge must be nonnegative")
    return edge * math.sqrt((vertices - 1) / (2 * vertices))


def calc3_extent(r: float, dim: int) -> float:
    """Extent of equal-radius classes whose centers form a regular ``dim``-simplex.

    The simplex edge is ``sqrt(1 - 2 r^2)``, as forced by the compatibility
    equation.
    """
    if not 0 <= r <= math.sqrt(0.5) + 1e-15:
        raise ValueError("r must lie in [0, sqrt(1/2)]")
    if dim < 0:
        raise ValueError("dim must be nonnegative")
    return math.sqrt((2 * r * r + dim) / (2 * (dim + 1)))


def glueable(A: AnalyticSpacing, B: AnalyticSpacing, same_space_dim: int | None = None, tol: float = DEFAULT_TOL) -> GlueVerdict:
    extA = extent(A, tol)
    extB = extent(B, tol)
    if not (extA.finite and extB.finite):
        which = "first" if not extA.finite else "second"
        return GlueVerdict(False, math.inf, reason=f"the {which} spacing has infinite extent")
    total = extA.squared + extB.squared
    if total > 1 + tol:
        return GlueVerdict(False, total, reason="squared extents sum to more than 1")
    dim = hull_basis(A, tol).shape[0] + hull_basis(B, tol).shape[0] + (1 if total < 1 - tol else 0)
    if same_space_dim is not None and dim > same_space_dim:
        return GlueVerdict(False, total, dim, reason=f"needs {dim} dimensions, only {same_space_dim} available")
    return GlueVerdict(True, total, dim)


@dataclass(frozen=True)
class GlueEmbedding:
    """A gluing together with where each part's glue site ended up."""

    spacing: AnalyticSpacing
    site_a: np.ndarray
    site_b: np.ndarray
    a_sq: float
    b_sq: float


def embed(A: AnalyticSpacing, B: AnalyticSpacing, tol: float = DEFAULT_TOL) -> GlueEmbedding:
    """Place both spacings in orthogonal blocks around their glue sites.

    Each part is written in coordinates of its own affine hull, centred at its
    glue site; the second part is then lifted by ``sqrt(1 - a - b)`` along an
    extra axis, which is omitted when that offset is zero.
    """
    verdict = glueable(A, B, tol=tol)
    if not verdict:
        raise ValueError(f"spacings do not glue: {verdict.reason}")
    extA, extB = extent(A, tol), extent(B, tol)
    a_sq, b_sq = extA.squared, extB.squared
    HA, HB = hull_basis(A, tol), hull_basis(B, tol)
    hA, hB = HA.shape[0], HB.shape[0]
    lift = 1.0 - a_sq - b_sq
    extra = 1 if lift > tol else 0
    alpha = math.sqrt(lift) if extra else 0.0
    n = hA + hB + extra

    classes = []
    for label, c in zip(A.labels, A.classes):
        center = np.zeros(n)
        center[:hA] = HA @ (c.center - extA.glue_site)
        basis = np.zeros((c.dim, n))
        basis[:, :hA] = c.basis @ HA.T
        classes.append(SphereClass(center, c.radius, basis, f"A.{label}"))
    for label, c in zip(B.labels, B.classes):
        center = np.zeros(n)
        center[hA:hA + hB] = HB @ (c.center - extB.glue_site)
        if extra:
            center[-1] = alpha
        basis = np.zeros((c.dim, n))
        basis[:, hA:hA + hB] = c.basis @ HB.T
        classes.append(SphereClass(center, c.radius, basis, f"B.{label}"))
    site_a = np.zeros(n)
    site_b = np.zeros(n)
    if extra:
        site_b[-1] = alpha
    glued = AnalyticSpacing(n, tuple(classes))
    report = validate(glued, max(tol, 1e-8))
    if not report.accepted:
        raise ValueError(f"gluing failed validation at {report.failure.stage.value}")
    return GlueEmbedding(glued, site_a, site_b, a_sq, b_sq)


def glue(A: AnalyticSpacing, B: AnalyticSpacing, tol: float = DEFAULT_TOL) -> AnalyticSpacing:
    return embed(A, B, tol).spacing
