"""Isometries of spacings: squash and stretch, normal forms, isometry testing.

A squash and stretch moves class centers and dilates each class about its
own center. Together with rigid motions and relabelings these are the maps
that preserve equidistance, and the signature classifies maximal spacings up
to them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .analytic import (
    SQRT_HALF,
    AnalyticSpacing,
    Flavor,
    SphereClass,
    centers_coincide,
    extent,
    from_signature,
    inner_classes,
    is_maximal,
    sig_of,
)
from .linalg import DEFAULT_TOL, aligning_rotation, gram_schmidt
from .signatures import classify
from .spacing import LabeledPointSet, PointClass

BISECTION_TOL = 1e-13
BISECTION_MAX_ITER = 200
_SCAN_POINTS = 64


def inner_radius_residual(r: float, ext_sq: float, r_outer: float) -> float:
    """Residual of the extent condition linking the inner and outer radii."""
    u = r * r
    s = r_outer * r_outer
    return 1.0 - u - (2.0 * u - 1.0) ** 2 / (4.0 * (1.0 - u - s)) - ext_sq


def solve_inner_radius(ext_sq: float, r_outer: float) -> float:
    """Smallest inner radius in ``[sqrt(1/2), sqrt(1 - r_outer^2))`` solving the extent condition.

    The residual is nonnegative at the left end and tends to minus infinity
    at the right end. A coarse scan locates the first sign change, which is
    then refined by bisection.
    """
    if not 0.0 <= ext_sq <= 0.5:
        raise ValueError("ext_sq must lie in [0, 1/2]")
    if not 0.0 <= r_outer < SQRT_HALF:
        raise ValueError("r_outer must lie in [0, sqrt(1/2))")
    lo = SQRT_HALF
    hi = math.sqrt(1.0 - r_outer * r_outer)

    def f(r):
        return inner_radius_residual(r, ext_sq, r_outer)

    if f(lo) <= 0.0:
        return lo
    grid = lo + (hi - lo) * np.arange(_SCAN_POINTS) / _SCAN_POINTS
    values = [f(x) for x in grid]
    a, b = grid[-1], hi
    for x0, x1, f1 in zip(grid, grid[1:], values[1:]):
        if f1 < 0.0:
            a, b = x0, x1
            break
    for _ in range(BISECTION_MAX_ITER):
        if b - a <= BISECTION_TOL:
            break
        mid = 0.5 * (a + b)
        if f(mid) >= 0.0:
            a = mid
        else:
            b = mid
    if b >= hi:
        return a
    return a if abs(f(a)) <= abs(f(b)) else b


class StepKind(str, enum.Enum):
    RIGID = "rigid"
    RECOLOR = "recolor"
    SQUASH_STRETCH = "squash_stretch"


@dataclass(frozen=True)
class RigidStep:
    """``x -> U x + t``."""

    rotation: np.ndarray
    translation: np.ndarray
    kind: StepKind = StepKind.RIGID


@dataclass(frozen=True)
class RecolorStep:
    """New class ``i`` is old class ``order[i]``."""

    order: tuple[int, ...]
    kind: StepKind = StepKind.RECOLOR


@dataclass(frozen=True)
class SquashStretchStep:
    """Class ``i`` maps by ``y -> new_centers[i] + factors[i] (y - old_centers[i])``."""

    old_centers: np.ndarray
    new_centers: np.ndarray
    factors: np.ndarray
    kind: StepKind = StepKind.SQUASH_STRETCH

    def __post_init__(self):
        if np.any(np.asarray(self.factors) == 0):
            raise ValueError("dilation factors must be nonzero")


@dataclass(frozen=True)
class IsometryRecord:
    steps: tuple = field(default_factory=tuple)

    def kinds(self) -> list[str]:
        return [step.kind.value for step in self.steps]


def apply_rigid(S: AnalyticSpacing, U: np.ndarray, t: np.ndarray) -> AnalyticSpacing:
    classes = tuple(
        SphereClass(U @ c.center + t, c.radius, c.basis @ U.T, c.label) for c in S.classes
    )
    return AnalyticSpacing(S.dimension, classes)


def _apply_squash(S: AnalyticSpacing, step: SquashStretchStep) -> AnalyticSpacing:
    classes = tuple(
        SphereClass(new, c.radius * abs(f), c.basis, c.label)
        for c, new, f in zip(S.classes, step.new_centers, step.factors)
    )
    return AnalyticSpacing(S.dimension, classes)


def replay(record: IsometryRecord, Y: LabeledPointSet) -> LabeledPointSet:
    """Apply a recorded isometry to a finite point set with matching classes."""
    classes = list(Y.classes)
    for step in record.steps:
        if step.kind is StepKind.RIGID:
            classes = [PointClass(c.label, c.points @ step.rotation.T + step.translation) for c in classes]
        elif step.kind is StepKind.SQUASH_STRETCH:
            classes = [
                PointClass(c.label, new + f * (c.points - old))
                for c, old, new, f in zip(classes, step.old_centers, step.new_centers, step.factors)
            ]
        else:
            classes = [classes[i] for i in step.order]
    return LabeledPointSet(Y.dimension, tuple(classes))


def _require_maximal(S: AnalyticSpacing, tol: float) -> None:
    verdict = is_maximal(S, tol)
    if not verdict:
        raise ValueError(f"spacing is not maximal: {verdict.reason}")


def _squash_step(S: AnalyticSpacing, outer: int, target_r: float, tol: float):
    _require_maximal(S, tol)
    if centers_coincide(S, tol):
        raise ValueError("outer-inner squash and stretch needs distinct centers")
    (inner,) = inner_classes(S, tol)
    if outer == inner:
        raise ValueError("the outer class must not be the inner class")
    if not 0.0 <= target_r < SQRT_HALF:
        raise ValueError("target_r must lie in [0, sqrt(1/2))")
    if (target_r > 0) != (S.classes[outer].dim > 0):
        raise ValueError("a positive target radius needs a class with a positive-dimensional support")

    rest = [i for i in range(len(S)) if i not in (outer, inner)]
    remainder = AnalyticSpacing(S.dimension, tuple(S.classes[i] for i in rest))
    ext = extent(remainder, tol)
    if not ext.finite:
        raise ValueError("the remaining classes have no glue site")
    ext_sq = min(ext.squared, 0.5)
    direction = S.classes[outer].center - ext.glue_site
    direction /= np.linalg.norm(direction)

    r_inner = solve_inner_radius(ext_sq, target_r)
    alpha = math.sqrt(1.0 - r_inner ** 2 - target_r ** 2)
    beta = (2.0 * r_inner ** 2 - 1.0) / (2.0 * alpha)

    old = S.centers
    new = old.copy()
    new[inner] = ext.glue_site + beta * direction
    new[outer] = ext.glue_site + (alpha + beta) * direction
    factors = np.ones(len(S))
    factors[inner] = r_inner / S.classes[inner].radius
    if S.classes[outer].radius > 0:
        factors[outer] = target_r / S.classes[outer].radius
    step = SquashStretchStep(old, new, factors)
    return _apply_squash(S, step), step


def outer_inner_squash_stretch(S: AnalyticSpacing, outer: int, target_r: float, tol: float = DEFAULT_TOL) -> AnalyticSpacing:
    """Give one outer class radius ``target_r``, moving it and the inner class along their common line.

    Every other class is left untouched; the inner radius is whatever keeps
    the spacing equidistant.
    """
    return _squash_step(S, outer, target_r, tol)[0]


def _role_order(S: AnalyticSpacing, tol: float) -> list[int]:
    dims = S.dims
    zeros = [i for i, d in enumerate(dims) if d == 0]
    if centers_coincide(S, tol):
        positives = [i for i, d in enumerate(dims) if d]
        return zeros + sorted(positives, key=lambda i: -dims[i])
    (inner,) = inner_classes(S, tol)
    outers = [i for i, d in enumerate(dims) if d and i != inner]
    return zeros + [inner] + sorted(outers, key=lambda i: -dims[i])


@dataclass(frozen=True)
class Alignment:
    rotation: np.ndarray
    translation: np.ndarray
    pairs: tuple[tuple[int, int], ...]
    residual: float


def align(A: AnalyticSpacing, B: AnalyticSpacing, tol: float = DEFAULT_TOL) -> Alignment:
    """Rigid motion taking ``A`` onto ``B`` after matching classes by role.

    Classes are paired as zero-radius, inner, then outer classes by
    decreasing support dimension. The center configuration relative to the
    reference center and every class support are sent across by one
    orthogonal map; ``residual`` is the largest leftover mismatch in centers,
    radii and supports.
    """
    if A.dimension != B.dimension or len(A) != len(B):
        raise ValueError("spacings must share ambient dimension and class count")
    if sig_of(A, tol) != sig_of(B, tol) or centers_coincide(A, tol) != centers_coincide(B, tol):
        raise ValueError("spacings have different signatures")
    oa, ob = _role_order(A, tol), _role_order(B, tol)
    coincident = centers_coincide(A, tol)
    ref_a = A.classes[oa[0]].center if coincident else A.classes[inner_classes(A, tol)[0]].center
    ref_b = B.classes[ob[0]].center if coincident else B.classes[inner_classes(B, tol)[0]].center
    Fa = gram_schmidt(A.centers[oa] - ref_a, tol, dim=A.dimension)
    Fb = gram_schmidt(B.centers[ob] - ref_b, tol, dim=B.dimension)
    if Fa.shape != Fb.shape:
        raise ValueError("center hulls have different dimensions")
    source = [Fa] + [A.classes[i].basis for i in oa]
    target = [Fb] + [B.classes[j].basis for j in ob]
    U = aligning_rotation(source, target, max(tol, 1e-9))
    t = ref_b - U @ ref_a
    residual = 0.0
    for i, j in zip(oa, ob):
        ca, cb = A.classes[i], B.classes[j]
        residual = max(
            residual,
            float(np.linalg.norm(U @ ca.center + t - cb.center)),
            abs(ca.radius - cb.radius),
        )
        if ca.dim:
            moved = ca.basis @ U.T
            leftover = moved - (moved @ cb.basis.T) @ cb.basis
            residual = max(residual, float(np.abs(leftover).max()))
    return Alignment(U, t, tuple(zip(oa, ob)), residual)


def to_equilateral_normal_form(S: AnalyticSpacing, r: float = 0.5, tol: float = DEFAULT_TOL):
    """Normal form with outer radius ``r`` plus the isometry that produces it.

    Returns ``(spacing, record)``. Class order is preserved; the output
    coincides with ``from_signature(sig_of(S), flavor, r)`` up to the class
    pairing reported by :func:`align`.
    """
    if not 0 < r < SQRT_HALF:
        raise ValueError("r must lie in the open interval (0, sqrt(1/2))")
    _require_maximal(S, tol)
    signature = sig_of(S, tol)
    steps = []
    current = S
    if centers_coincide(S, tol):
        flavor = Flavor.COINCIDENT
        radii = S.radii
        if len(S) <= 2 and (radii > 0).all() and np.abs(radii - SQRT_HALF).max() > tol:
            old = S.centers
            step = SquashStretchStep(old, old.copy(), SQRT_HALF / radii)
            current = _apply_squash(current, step)
            steps.append(step)
    else:
        flavor = Flavor.DISTINCT
        (inner,) = inner_classes(S, tol)
        for i, c in enumerate(S.classes):
            if i != inner and c.dim and abs(current.classes[i].radius - r) > tol:
                current, step = _squash_step(current, i, r, tol)
                steps.append(step)
    placement = classify(signature)
    n_min = (placement.in_S_eq if flavor is Flavor.COINCIDENT else placement.in_S_neq)[1]
    target = from_signature(signature, flavor, r, dims_slack=S.dimension - n_min)
    alignment = align(current, target, tol)
    steps.append(RigidStep(alignment.rotation, alignment.translation))
    out = apply_rigid(current, alignment.rotation, alignment.translation)
    return out, IsometryRecord(tuple(steps))


def isometric(A: AnalyticSpacing, B: AnalyticSpacing, tol: float = DEFAULT_TOL) -> bool:
    """Maximal spacings are isometric exactly when signature and center flavor agree."""
    sa, sb = sig_of(A, tol), sig_of(B, tol)
    if A.dimension != B.dimension:
        return False
    return sa == sb and centers_coincide(A, tol) == centers_coincide(B, tol)


def random_rigid(S: AnalyticSpacing, rng: np.random.Generator) -> AnalyticSpacing:
    """Apply a random orthogonal map and translation; handy for tests and fixtures."""
    n = S.dimension
    if n == 0:
        return S
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    Q = Q * np.sign(np.diag(R))
    return apply_rigid(S, Q, rng.standard_normal(n))


def squash_targets(S: AnalyticSpacing, targets: Sequence[float], tol: float = DEFAULT_TOL) -> AnalyticSpacing:
    """Apply outer-inner squash and stretches so outer positive class ``i`` gets ``targets[i]``.

    ``targets`` lists one radius per outer positive class, in class order.
    """
    (inner,) = inner_classes(S, tol)
    outers = [i for i, c in enumerate(S.classes) if c.dim and i != inner]
    if len(targets) != len(outers):
        raise ValueError("need one target radius per outer positive class")
    current = S
    for i, t in zip(outers, targets):
        current = outer_inner_squash_stretch(current, i, t, tol)
    return current
