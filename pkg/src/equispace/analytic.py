"""Symbolic spacings: each class is a full sphere inside an affine support.

A class is stored as ``(center, radius, basis)`` and stands for the set of
points at distance ``radius`` from ``center`` inside ``center + span(basis)``.
Zero-radius classes have an empty basis and stand for the single point
``center``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import DEFAULT_TOL, affine_frame, as_vectors, cross_inner, gram_schmidt, regular_simplex
from .orthocentric import orthocentric_verdict
from .signatures import Signature, classify
from .spacing import (
    ACCEPTED,
    LabeledPointSet,
    PointClass,
    SpacingSummary,
    Stage,
    VerifyReport,
    _reject,
)

SQRT_HALF = math.sqrt(0.5)


class Flavor(str, enum.Enum):
    COINCIDENT = "coincident"
    DISTINCT = "distinct"


@dataclass(frozen=True)
class SphereClass:
    center: np.ndarray
    radius: float
    basis: np.ndarray
    label: str | None = None

    def __post_init__(self):
        center = np.array(np.ravel(self.center), dtype=float)
        basis = np.array(as_vectors(self.basis, center.shape[0]), dtype=float)
        center.flags.writeable = False
        basis.flags.writeable = False
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius < 0 or not math.isfinite(self.radius):
            raise ValueError("radius must be a finite nonnegative number")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


@dataclass(frozen=True)
class AnalyticSpacing:
    dimension: int
    classes: tuple[SphereClass, ...]

    def __post_init__(self):
        classes = tuple(self.classes)
        object.__setattr__(self, "classes", classes)
        if not classes:
            raise ValueError("a spacing needs at least one class")
        for c in classes:
            if c.center.shape[0] != self.dimension:
                raise ValueError("class centers must live in the ambient dimension")

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def centers(self) -> np.ndarray:
        return np.array([c.center for c in self.classes]).reshape(len(self.classes), self.dimension)

    @property
    def radii(self) -> np.ndarray:
        return np.array([c.radius for c in self.classes])

    @property
    def dims(self) -> list[int]:
        return [c.dim for c in self.classes]

    @property
    def labels(self) -> list[str]:
        return [c.label if c.label is not None else f"y{i}" for i, c in enumerate(self.classes)]

    def relabel(self, labels: Sequence[str]) -> "AnalyticSpacing":
        return AnalyticSpacing(
            self.dimension,
            tuple(SphereClass(c.center, c.radius, c.basis, lab) for c, lab in zip(self.classes, labels)),
        )


def from_summary(summary: SpacingSummary) -> AnalyticSpacing:
    """The analytic spacing spanned by the summary of a finite point set."""
    classes = tuple(SphereClass(c.center, c.radius, c.frame.basis) for c in summary.classes)
    return AnalyticSpacing(summary.center_frame.ambient_dim, classes)


def validate(S: AnalyticSpacing, tol: float = DEFAULT_TOL, radius_bound: bool = True) -> VerifyReport:
    """Check the construction conditions and report the first violation.

    ``radius_bound`` caps a lone class at radius 1, as :func:`verify` does.
    """
    I = len(S)
    for i, c in enumerate(S.classes):
        if c.dim:
            worst = float(np.abs(c.basis @ c.basis.T - np.eye(c.dim)).max())
            if worst > tol:
                return _reject(Stage.CLASS_ORTHOGONALITY, (i,), worst)
    for i, c in enumerate(S.classes):
        if (c.radius > tol) != (c.dim > 0):
            return _reject(Stage.RADIUS_DIMENSION, (i,), c.radius)
    for i in range(I):
        for j in range(i + 1, I):
            worst = cross_inner(S.classes[i].basis, S.classes[j].basis)
            if worst > tol:
                return _reject(Stage.CLASS_ORTHOGONALITY, (i, j), worst)
    centers = S.centers
    center_basis = gram_schmidt(centers[1:] - centers[0], tol, dim=S.dimension)
    for i, c in enumerate(S.classes):
        worst = cross_inner(c.basis, center_basis)
        if worst > tol:
            return _reject(Stage.CENTER_FRAME_ORTHOGONALITY, (i,), worst)
    radii = S.radii
    for i in range(I):
        for j in range(i + 1, I):
            diff = centers[i] - centers[j]
            gap = abs(diff @ diff + radii[i] ** 2 + radii[j] ** 2 - 1.0)
            if gap > tol:
                return _reject(Stage.CENTER_SPACING, (i, j), gap)
    if radius_bound and I == 1 and radii[0] > 1 + tol:
        return _reject(Stage.SINGLE_CLASS_SPHERE, (0,), radii[0] - 1)
    return ACCEPTED


def _require_valid(S: AnalyticSpacing, tol: float, radius_bound: bool = True) -> None:
    report = validate(S, tol, radius_bound)
    if not report.accepted:
        f = report.failure
        raise ValueError(f"invalid spacing: {f.stage.value} at classes {f.classes} (residual {f.residual:.3g})")


def sample(S: AnalyticSpacing, points_per_class: int, seed: int = 0) -> LabeledPointSet:
    """Finite points from every class sphere.

    Zero-radius classes give their center. A class with a d-dimensional
    support first takes the ``2d`` signed basis directions (only two points
    exist when ``d = 1``), then seeded uniformly random directions.
    """
    if points_per_class < 1:
        raise ValueError("points_per_class must be at least 1")
    _require_valid(S, tol=1e-8)
    rng = np.random.default_rng(seed)
    out = []
    for label, c in zip(S.labels, S.classes):
        if c.dim == 0:
            pts = c.center[None, :].copy()
        else:
            count = min(points_per_class, 2) if c.dim == 1 else points_per_class
            signed = np.empty((2 * c.dim, c.dim))
            signed[0::2] = np.eye(c.dim)
            signed[1::2] = -np.eye(c.dim)
            dirs = signed[:count]
            extra = count - dirs.shape[0]
            if extra > 0:
                g = rng.standard_normal((extra, c.dim))
                g /= np.linalg.norm(g, axis=1, keepdims=True)
                dirs = np.vstack([dirs, g])
            pts = c.center + c.radius * (dirs @ c.basis)
        out.append(PointClass(label, pts))
    return LabeledPointSet(S.dimension, tuple(out))


@dataclass(frozen=True)
class ExtentResult:
    finite: bool
    value: float = math.inf
    glue_site: np.ndarray | None = None

    @property
    def squared(self) -> float:
        return self.value ** 2 if self.finite else math.inf


def extent(S: AnalyticSpacing, tol: float = DEFAULT_TOL) -> ExtentResult:
    """Distance from the glue site to every point of ``S``, or infinite if there is none.

    A point equidistant from a whole class sphere must project onto the
    class center, so the glue site lives in the hull of the centers; there
    it solves ``|c_i - x|^2 + r_i^2 = const`` by least squares.
    """
    _require_valid(S, tol, radius_bound=False)
    centers = S.centers
    radii = S.radii
    frame = affine_frame(centers, tol)
    Q = (centers[1:] - centers[0]) @ frame.basis.T
    rhs = 0.5 * (np.einsum("ij,ij->i", Q, Q) + radii[1:] ** 2 - radii[0] ** 2)
    if frame.dim:
        y, *_ = np.linalg.lstsq(Q, rhs, rcond=None)
    else:
        y = np.zeros(0)
    misfit = float(np.abs(Q @ y - rhs).max()) if rhs.size else 0.0
    if misfit > tol:
        return ExtentResult(False)
    value = math.sqrt(float(y @ y) + radii[0] ** 2)
    if value > 1 + tol:
        return ExtentResult(False)
    site = frame.base + y @ frame.basis
    return ExtentResult(True, value, site)


def centers_coincide(S: AnalyticSpacing, tol: float = DEFAULT_TOL) -> bool:
    centers = S.centers
    return bool(np.linalg.norm(centers - centers[0], axis=1).max() <= tol)


@dataclass(frozen=True)
class MaximalityVerdict:
    maximal: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.maximal


def is_maximal(S: AnalyticSpacing, tol: float = DEFAULT_TOL) -> MaximalityVerdict:
    """Dimension count plus the radius or orthocentricity conditions.

    A single class is accepted when its sphere fills the ambient space; the
    enumerated tables list such one-class entries.
    """
    _require_valid(S, tol)
    I = len(S)
    centers = S.centers
    radii = S.radii
    center_dim = affine_frame(centers, tol).dim
    total = center_dim + sum(S.dims)
    if total != S.dimension:
        return MaximalityVerdict(False, f"dimension count {total} != ambient {S.dimension}")
    if centers_coincide(S, tol):
        if I == 2:
            gap = abs(radii[0] ** 2 + radii[1] ** 2 - 1.0)
            if gap > tol:
                return MaximalityVerdict(False, f"coincident pair radii miss r1^2 + r2^2 = 1 by {gap:.3g}")
        elif I >= 3:
            gap = float(np.abs(radii - SQRT_HALF).max())
            if gap > tol:
                return MaximalityVerdict(False, f"coincident radii miss sqrt(1/2) by {gap:.3g}")
        return MaximalityVerdict(True, "coincident centers")
    if center_dim != I - 2:
        return MaximalityVerdict(False, f"center hull has dimension {center_dim}, expected {I - 2}")
    ok, sol = orthocentric_verdict(centers, tol)
    if not ok:
        return MaximalityVerdict(False, f"centers are not orthocentric (residual {sol.residual:.3g})")
    inner = int(np.sum(radii > SQRT_HALF + tol))
    if inner != 1:
        return MaximalityVerdict(False, f"{inner} classes have radius above sqrt(1/2)")
    return MaximalityVerdict(True, "distinct centers")


def inner_classes(S: AnalyticSpacing, tol: float = DEFAULT_TOL) -> list[int]:
    """Every class when centers coincide, otherwise the classes of largest radius."""
    _require_valid(S, tol)
    if centers_coincide(S, tol):
        return list(range(len(S)))
    radii = S.radii
    return [int(i) for i in np.flatnonzero(radii >= radii.max() - tol)]


def sig_of(S: AnalyticSpacing, tol: float = DEFAULT_TOL) -> Signature:
    verdict = is_maximal(S, tol)
    if not verdict:
        raise ValueError(f"signatures are defined for maximal spacings only: {verdict.reason}")
    dims = S.dims
    m = sum(1 for d in dims if d == 0)
    if centers_coincide(S, tol):
        return Signature(m, tuple(sorted((d for d in dims if d), reverse=True)))
    (inner,) = inner_classes(S, tol)
    rest = [d for i, d in enumerate(dims) if d and i != inner]
    return Signature(m, (dims[inner],) + tuple(sorted(rest, reverse=True)))


def feasible_dims(radii: Sequence[float], center_span_dim: int, dims: Sequence[int], n: int) -> bool:
    if len(radii) != len(dims):
        raise ValueError("radii and dims must have the same length")
    if any((d == 0) != (r == 0) for r, d in zip(radii, dims)):
        return False
    return center_span_dim + sum(dims) <= n


def _axes(n: int, start: int, count: int) -> np.ndarray:
    basis = np.zeros((count, n))
    basis[np.arange(count), start + np.arange(count)] = 1.0
    return basis


def distinct_offsets(m: int, k: int, r: float) -> tuple[float, float, float]:
    """Offsets ``(alpha_0, alpha_pos)`` of the two center blocks and the inner radius.

    The ``m`` zero-radius centers form a unit regular simplex and the ``k - 1``
    outer positive centers a regular simplex of edge ``sqrt(1 - 2 r^2)``; the
    blocks sit on opposite sides of the inner center along a shared axis.
    Solving the three cross-block compatibility equations gives a linear
    equation for ``alpha_0``. A missing block pins the inner center to the
    circumcenter of the other one.
    """
    rho0_sq = (m - 1) / (2 * m) if m else 0.0
    rho_pos_sq = (1 - 2 * r * r) * (k - 2) / (2 * (k - 1)) if k >= 2 else 0.0
    if m and k >= 2:
        T = 1.0 - r * r - rho0_sq - rho_pos_sq
        if T <= 0:
            raise ValueError(f"offset system has no real solution (T = {T:.3g})")
        root = math.sqrt(T)
        a0 = (1.0 - 2.0 * rho0_sq) / (2.0 * root)
        a_pos = root - a0
        inner_sq = 1.0 - rho0_sq - a0 * a0
    elif m:
        a0, a_pos = 0.0, 0.0
        inner_sq = 1.0 - rho0_sq
    elif k >= 2:
        a0, a_pos = 0.0, 0.0
        inner_sq = 1.0 - r * r - rho_pos_sq
    else:
        raise ValueError("distinct centers need at least three classes")
    if inner_sq <= 0:
        raise ValueError(f"offset system gives a non-positive inner radius ({inner_sq:.3g})")
    return a0, a_pos, math.sqrt(inner_sq)


def from_signature(s: Signature, flavor: Flavor | str = Flavor.COINCIDENT, r: float = 0.5, dims_slack: int = 0) -> AnalyticSpacing:
    """Equilateral normal form with signature ``s`` in its minimal dimension.

    Coincident flavor: every center at the origin. Distinct flavor: class
    order is zero-radius classes, then the inner class, then the outer
    positive classes; the inner center is the origin. ``r`` is the radius of
    the outer positive classes and is only used when there are some.
    """
    flavor = Flavor(flavor)
    placement = classify(s)
    if dims_slack < 0:
        raise ValueError("dims_slack must be nonnegative")
    if flavor is Flavor.COINCIDENT:
        if placement.in_S_eq is None:
            raise ValueError(f"{s} is not a valid coincident-center signature")
        return _coincident(s, placement.in_S_eq[1] + dims_slack)
    if placement.in_S_neq is None:
        raise ValueError(f"{s} is not a valid distinct-center signature")
    if s.k >= 2 and not 0 < r < SQRT_HALF:
        raise ValueError("r must lie in the open interval (0, sqrt(1/2))")
    return _distinct(s, r, placement.in_S_neq[1] + dims_slack)


def _coincident(s: Signature, n: int) -> AnalyticSpacing:
    I = s.classes
    if I >= 3 or (I == 2 and s.m == 0) or I == 1:
        positive_r = SQRT_HALF
    else:
        positive_r = 1.0
    origin = np.zeros(n)
    classes = [SphereClass(origin, 0.0, np.zeros((0, n))) for _ in range(s.m)]
    offset = 0
    for d in s.d:
        classes.append(SphereClass(origin, positive_r, _axes(n, offset, d)))
        offset += d
    return AnalyticSpacing(n, tuple(classes))


def _distinct(s: Signature, r: float, n: int) -> AnalyticSpacing:
    m, k = s.m, s.k
    a0, a_pos, inner_r = distinct_offsets(m, k, r)
    zero_block = m - 1 if m else 0
    pos_block = k - 2 if k >= 2 else 0
    axis = 1 if (m and k >= 2) else 0
    center_dims = zero_block + pos_block + axis
    axis_col = zero_block + pos_block

    classes = []
    if m:
        simplex = regular_simplex(m, 1.0)
        for v in simplex:
            c = np.zeros(n)
            c[:zero_block] = v
            if axis:
                c[axis_col] = -a0
            classes.append(SphereClass(c, 0.0, np.zeros((0, n))))
    offset = center_dims
    classes.append(SphereClass(np.zeros(n), inner_r, _axes(n, offset, s.d[0])))
    offset += s.d[0]
    if k >= 2:
        simplex = regular_simplex(k - 1, math.sqrt(1.0 - 2.0 * r * r))
        for v, d in zip(simplex, s.d[1:]):
            c = np.zeros(n)
            c[zero_block:zero_block + pos_block] = v
            if axis:
                c[axis_col] = a_pos
            classes.append(SphereClass(c, r, _axes(n, offset, d)))
            offset += d
    return AnalyticSpacing(n, tuple(classes))


def inscribed_spacing(radii: Sequence[float], dims: Sequence[int], sphere_sq: float, tol: float = DEFAULT_TOL) -> AnalyticSpacing:
    """A spacing whose points all lie on the sphere of squared radius ``sphere_sq`` at the origin.

    Centers are recovered from their Gram matrix
    ``(sphere_sq - 1/2) J + diag(1/2 - r_i^2)``, which encodes both
    ``|c_i|^2 + r_i^2 = sphere_sq`` and the pairwise compatibility equation.
    """
    radii = np.asarray(radii, dtype=float)
    if len(dims) != len(radii):
        raise ValueError("radii and dims must have the same length")
    if (radii ** 2 > sphere_sq + tol).any() or (radii ** 2 >= 0.5).any():
        raise ValueError("radii must satisfy r^2 < 1/2 and r^2 <= sphere_sq")
    if any((d == 0) != (r == 0) for r, d in zip(radii, dims)):
        raise ValueError("a class has positive radius exactly when it has dimensions")
    I = len(radii)
    G = (sphere_sq - 0.5) * np.ones((I, I)) + np.diag(0.5 - radii ** 2)
    w, V = np.linalg.eigh(G)
    if w.min() < -tol:
        raise ValueError("no real centers for these radii on this sphere")
    keep = w > tol
    coords = V[:, keep] * np.sqrt(w[keep])
    center_dim = coords.shape[1]
    n = center_dim + int(sum(dims))
    classes = []
    offset = center_dim
    for x, r, d in zip(coords, radii, dims):
        c = np.zeros(n)
        c[:center_dim] = x
        classes.append(SphereClass(c, float(r), _axes(n, offset, d)))
        offset += d
    return AnalyticSpacing(n, tuple(classes))


def hull_basis(S: AnalyticSpacing, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis for the directions of the affine hull of all points of ``S``."""
    centers = S.centers
    vectors = [centers[1:] - centers[0]] + [c.basis for c in S.classes]
    return gram_schmidt(np.vstack(vectors), tol, dim=S.dimension)
