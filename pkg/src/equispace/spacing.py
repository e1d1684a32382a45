"""Finite labeled point sets: summaries, fast and naive verification, recoloring."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .linalg import (
    DEFAULT_TOL,
    AffineFrame,
    NoCommonSphere,
    affine_frame,
    as_vectors,
    circumcenter,
    cross_inner,
    gram_schmidt,
    project,
    reflect,
)


@dataclass(frozen=True)
class PointClass:
    label: str
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(as_vectors(self.points), dtype=float)
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "label", str(self.label))


@dataclass(frozen=True)
class LabeledPointSet:
    dimension: int
    classes: tuple[PointClass, ...]

    def __post_init__(self):
        classes = tuple(
            c if isinstance(c, PointClass) else PointClass(*c) for c in self.classes
        )
        object.__setattr__(self, "classes", classes)
        if not classes:
            raise ValueError("a labeled point set needs at least one class")
        labels = [c.label for c in classes]
        if len(set(labels)) != len(labels):
            raise ValueError("class labels must be unique")
        for c in classes:
            if c.points.shape[0] == 0:
                raise ValueError(f"class {c.label!r} is empty")
            if c.points.shape[1] != self.dimension:
                raise ValueError(
                    f"class {c.label!r} has points of dimension {c.points.shape[1]}, "
                    f"expected {self.dimension}"
                )

    @classmethod
    def from_lists(cls, classes: dict[str, Sequence], dimension: int | None = None):
        items = [(label, as_vectors(pts)) for label, pts in classes.items()]
        if dimension is None:
            dimension = items[0][1].shape[1]
        return cls(dimension, tuple(PointClass(label, pts) for label, pts in items))

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.classes]

    @property
    def point_count(self) -> int:
        return sum(c.points.shape[0] for c in self.classes)

    def __len__(self) -> int:
        return len(self.classes)


class Stage(str, enum.Enum):
    CLASS_ORTHOGONALITY = "class_orthogonality"
    CONSTANT_RADIUS = "constant_radius"
    CENTER_FRAME_ORTHOGONALITY = "center_frame_orthogonality"
    CENTER_SPACING = "center_spacing"
    SINGLE_CLASS_SPHERE = "single_class_sphere"
    # used by the naive oracle and by analytic validation respectively
    PAIR_DISTANCE = "pair_distance"
    RADIUS_DIMENSION = "radius_dimension"


@dataclass(frozen=True)
class Failure:
    stage: Stage
    classes: tuple[int, ...]
    residual: float


@dataclass(frozen=True)
class VerifyReport:
    failure: Failure | None = None

    @property
    def accepted(self) -> bool:
        return self.failure is None

    def __bool__(self) -> bool:
        return self.accepted

    def to_json(self) -> dict:
        if self.failure is None:
            return {"accepted": True}
        return {
            "accepted": False,
            "stage": self.failure.stage.value,
            "classes": list(self.failure.classes),
            "residual": float(self.failure.residual),
        }


ACCEPTED = VerifyReport()
_NAIVE_BLOCK = 256


def _reject(stage: Stage, classes: Iterable[int], residual: float) -> VerifyReport:
    return VerifyReport(Failure(stage, tuple(int(i) for i in classes), float(residual)))


@dataclass(frozen=True)
class ClassSummary:
    center: np.ndarray
    radius: float
    frame: AffineFrame


@dataclass(frozen=True)
class SpacingSummary:
    classes: tuple[ClassSummary, ...]
    center_frame: AffineFrame

    @property
    def centers(self) -> np.ndarray:
        return np.array([c.center for c in self.classes])

    @property
    def radii(self) -> np.ndarray:
        return np.array([c.radius for c in self.classes])


class SummaryError(ValueError):
    pass


def summarize(Y: LabeledPointSet, tol: float = DEFAULT_TOL) -> SpacingSummary:
    """Center, radius and support of every class.

    With two or more classes each center is the projection onto the class's
    support of the first point of the next class (cyclically). A single class
    is summarized by its circumcenter.
    """
    if len(Y) == 1:
        pts = Y.classes[0].points
        try:
            center, radius = circumcenter(pts, tol)
        except NoCommonSphere as exc:
            raise SummaryError(str(exc)) from exc
        frame = affine_frame(pts, tol)
        summary = ClassSummary(center, radius, frame)
        return SpacingSummary((summary,), affine_frame(center[None, :], tol))
    frames = [affine_frame(c.points, tol) for c in Y.classes]
    summaries = []
    for i, (cls, frame) in enumerate(zip(Y.classes, frames)):
        witness = Y.classes[(i + 1) % len(Y)].points[0]
        center = project(witness, frame)
        radius = float(np.linalg.norm(cls.points[0] - center))
        summaries.append(ClassSummary(center, radius, frame))
    centers = np.array([s.center for s in summaries])
    return SpacingSummary(tuple(summaries), affine_frame(centers, tol))


def _single_class(Y: LabeledPointSet, tol: float, radius_bound: bool) -> VerifyReport:
    try:
        _, radius = circumcenter(Y.classes[0].points, tol)
    except NoCommonSphere as exc:
        return _reject(Stage.SINGLE_CLASS_SPHERE, (0,), exc.residual)
    if radius_bound and radius > 1 + tol:
        return _reject(Stage.SINGLE_CLASS_SPHERE, (0,), radius - 1)
    return ACCEPTED


def verify(Y: LabeledPointSet, tol: float = DEFAULT_TOL, radius_bound: bool = True) -> VerifyReport:
    """Check equidistance in time linear in the number of points.

    Runs the stages in order (orthogonal supports, constant radius, supports
    orthogonal to the center hull, center spacing) and reports the first one
    that fails together with its residual.
    """
    I = len(Y)
    if I == 1:
        return _single_class(Y, tol, radius_bound)

    frames = [affine_frame(c.points, tol) for c in Y.classes]
    for i in range(I):
        for j in range(i + 1, I):
            worst = cross_inner(frames[i].basis, frames[j].basis)
            if worst > tol:
                return _reject(Stage.CLASS_ORTHOGONALITY, (i, j), worst)

    centers = np.empty((I, Y.dimension))
    radii = np.empty(I)
    for i, (cls, frame) in enumerate(zip(Y.classes, frames)):
        witness = Y.classes[(i + 1) % I].points[0]
        center = project(witness, frame)
        dists = np.linalg.norm(cls.points - center, axis=1)
        spread = float(np.abs(dists - dists[0]).max())
        if spread > tol:
            return _reject(Stage.CONSTANT_RADIUS, (i,), spread)
        centers[i] = center
        radii[i] = dists[0]

    center_basis = gram_schmidt(centers[1:] - centers[0], tol, dim=Y.dimension)
    for i, frame in enumerate(frames):
        worst = cross_inner(frame.basis, center_basis)
        if worst > tol:
            return _reject(Stage.CENTER_FRAME_ORTHOGONALITY, (i,), worst)

    diffs = centers[:, None, :] - centers[None, :, :]
    gap = np.einsum("ijk,ijk->ij", diffs, diffs) + radii[:, None] ** 2 + radii[None, :] ** 2 - 1.0
    for i in range(I):
        for j in range(i + 1, I):
            if abs(gap[i, j]) > tol:
                return _reject(Stage.CENTER_SPACING, (i, j), abs(gap[i, j]))
    return ACCEPTED


def verify_naive(Y: LabeledPointSet, tol: float = DEFAULT_TOL, radius_bound: bool = True) -> VerifyReport:
    """Check every cross-class distance directly; quadratic in the number of points."""
    I = len(Y)
    if I == 1:
        return _single_class(Y, tol, radius_bound)
    for i in range(I):
        for j in range(i + 1, I):
            P, Q = Y.classes[i].points, Y.classes[j].points
            worst = 0.0
            # row blocks keep memory bounded; the work stays quadratic
            for start in range(0, P.shape[0], _NAIVE_BLOCK):
                D = cdist(P[start:start + _NAIVE_BLOCK], Q)
                worst = max(worst, float(np.abs(D - 1.0).max()))
            if worst > tol:
                return _reject(Stage.PAIR_DISTANCE, (i, j), worst)
    return ACCEPTED


def recolor(Y: LabeledPointSet, partition: Sequence[Iterable[str]]) -> LabeledPointSet:
    """Merge classes block by block; merged labels are joined with ``+``."""
    blocks = [list(block) for block in partition]
    if len(blocks) < 2:
        raise ValueError("recoloring needs at least two blocks")
    if any(not block for block in blocks):
        raise ValueError("recoloring blocks must be nonempty")
    flat = [label for block in blocks for label in block]
    if sorted(flat) != sorted(Y.labels) or len(set(flat)) != len(flat):
        raise ValueError("blocks must cover every label exactly once")
    by_label = {c.label: c.points for c in Y.classes}
    merged = tuple(
        PointClass("+".join(block), np.vstack([by_label[label] for label in block]))
        for block in blocks
    )
    return LabeledPointSet(Y.dimension, merged)


def _dedupe(existing: np.ndarray, extra: np.ndarray, tol: float) -> np.ndarray:
    keep = []
    pool = existing
    for p in extra:
        if np.abs(pool - p).max(axis=1).min() > tol:
            keep.append(p)
            pool = np.vstack([pool, p])
    if not keep:
        return existing
    return np.vstack([existing, np.array(keep)])


def ortho_reflect_expand(Y: LabeledPointSet, class_index: int, tol: float = DEFAULT_TOL) -> LabeledPointSet:
    """Add to one class its reflection through the foot of its center on the other centers' hull."""
    if len(Y) < 2:
        raise ValueError("ortho-reflection needs at least two classes")
    if not 0 <= class_index < len(Y):
        raise IndexError(f"class index {class_index} out of range")
    report = verify(Y, tol)
    if not report.accepted:
        raise ValueError(f"input is not an equidistant spacing ({report.failure.stage.value})")
    summary = summarize(Y, tol)
    centers = summary.centers
    others = np.delete(centers, class_index, axis=0)
    foot = project(centers[class_index], affine_frame(others, tol))
    cls = Y.classes[class_index]
    expanded = _dedupe(cls.points, reflect(cls.points, foot), tol)
    classes = list(Y.classes)
    classes[class_index] = PointClass(cls.label, expanded)
    return LabeledPointSet(Y.dimension, tuple(classes))
