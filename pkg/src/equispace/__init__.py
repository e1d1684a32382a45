"""Equidistant spacings of labeled point classes: verification, construction and classification."""

from .analytic import (
    AnalyticSpacing,
    ExtentResult,
    Flavor,
    SphereClass,
    extent,
    from_signature,
    inscribed_spacing,
    is_maximal,
    sample,
    sig_of,
    validate,
)
from .gluing import glue, glueable, glued_extent
from .signatures import Signature, classify, count_maximal, enumerate_eq, enumerate_neq, parse_signature
from .spacing import LabeledPointSet, PointClass, Stage, VerifyReport, recolor, summarize, verify, verify_naive
from .transforms import align, isometric, outer_inner_squash_stretch, replay, to_equilateral_normal_form

__version__ = "0.1.0"

__all__ = [
    "AnalyticSpacing",
    "ExtentResult",
    "Flavor",
    "LabeledPointSet",
    "PointClass",
    "Signature",
    "SphereClass",
    "Stage",
    "VerifyReport",
    "align",
    "classify",
    "count_maximal",
    "enumerate_eq",
    "enumerate_neq",
    "extent",
    "from_signature",
    "glue",
    "glueable",
    "glued_extent",
    "inscribed_spacing",
    "is_maximal",
    "isometric",
    "outer_inner_squash_stretch",
    "parse_signature",
    "recolor",
    "replay",
    "sample",
    "sig_of",
    "summarize",
    "to_equilateral_normal_form",
    "validate",
    "verify",
    "verify_naive",
]
