import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import small_signatures
from equispace.analytic import (
    AnalyticSpacing,
    SphereClass,
    extent,
    from_signature,
    inscribed_spacing,
    sample,
    validate,
)
from equispace.gluing import (
    calc3_extent,
    embed,
    glue,
    glueable,
    glued_extent,
    glued_glue_site,
    simplex_circumradius,
)
from equispace.signatures import Signature
from equispace.spacing import verify

SIGS = small_signatures(5)


def points(*pts):
    """One singleton class per point."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    n = pts.shape[1]
    return AnalyticSpacing(n, tuple(SphereClass(p, 0.0, np.zeros((0, n))) for p in pts))


def diameter(radius):
    return AnalyticSpacing(1, (SphereClass((0.0,), radius, [(1.0,)]),))


def measured_extent(T, site):
    """Largest distance from ``site`` to a dense sample of ``T``."""
    Y = sample(T, 24, seed=3)
    return max(np.linalg.norm(c.points - site, axis=1).max() for c in Y.classes)


def test_glued_extent_examples():
    assert glued_extent(0.25, 0.25) == pytest.approx(math.sqrt(3 / 8), abs=1e-15)
    assert glued_extent(0, 0) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        glued_extent(0.5, 0.5)
    with pytest.raises(ValueError):
        glued_extent(-0.1, 0.2)


def test_glued_glue_site_examples():
    a, b = np.array([0.0, 0, 0]), np.array([0.0, 0, 1])
    np.testing.assert_allclose(glued_glue_site(a, b, 0.2, 0.2), (a + b) / 2)
    g = math.sqrt(0.5)
    np.testing.assert_allclose(glued_glue_site([0, 0], [0, g], 0.5, 0.0), (0, 0), atol=1e-15)
    np.testing.assert_allclose(glued_glue_site(a, b, 0.0, 0.25), (a + b) / 2 - (a - b) / 6)


def test_simplex_circumradius():
    assert simplex_circumradius(1, 2) == pytest.approx(0.5)
    assert simplex_circumradius(1, 4) == pytest.approx(math.sqrt(3 / 8))
    assert simplex_circumradius(1, 1) == 0


def test_calc3_extent_examples():
    assert calc3_extent(0, 2) == pytest.approx(math.sqrt(1 / 3))
    assert calc3_extent(math.sqrt(0.5), 0) == pytest.approx(math.sqrt(0.5))
    assert calc3_extent(0.5, 1) == pytest.approx(math.sqrt(3 / 8))
    # the last case against an explicit two-class spacing
    r = 0.5
    gap = math.sqrt(1 - 2 * r * r)
    T = AnalyticSpacing(3, (SphereClass((0, 0, 0), r, [(0, 1, 0)]), SphereClass((gap, 0, 0), r, [(0, 0, 1)])))
    assert extent(T).value == pytest.approx(calc3_extent(r, 1), abs=1e-12)


def test_glueable_equality_case():
    cross = from_signature(Signature(0, (1, 1)), "coincident")
    v = glueable(cross, cross)
    assert v.glueable
    assert v.extent_sum_sq == pytest.approx(1.0)
    assert v.min_ambient_dim == 4
    assert not glueable(cross, cross, same_space_dim=3)


def test_glueable_rejects_large_extents():
    v = glueable(diameter(1.0), diameter(1.0))
    assert not v
    assert v.extent_sum_sq == pytest.approx(2.0)


def test_glueable_rejects_infinite_extent():
    # collinear centers with unequal offsets: no point is equidistant from all
    two_points_and_line = from_signature(Signature(2, (1,)), "distinct")
    assert not extent(two_points_and_line).finite
    v = glueable(two_points_and_line, diameter(0.1))
    assert not v
    assert "infinite" in v.reason


def test_glue_two_diameters():
    G = glue(diameter(0.5), diameter(0.5))
    assert G.dimension == 3
    Y = sample(G, 4)
    assert verify(Y)
    ext = extent(G)
    assert ext.value == pytest.approx(math.sqrt(3 / 8), abs=1e-12)


def test_glue_two_edges_makes_tetrahedron():
    edge = points((0.0,), (1.0,))
    G = glue(edge, edge)
    C = G.centers
    D = np.linalg.norm(C[:, None] - C[None], axis=-1)
    np.testing.assert_allclose(D[~np.eye(4, dtype=bool)], 1.0, atol=1e-12)
    ext = extent(G)
    assert ext.value == pytest.approx(math.sqrt(3 / 8), abs=1e-12)
    assert measured_extent(G, ext.glue_site) == pytest.approx(math.sqrt(3 / 8), abs=1e-12)
    assert G.labels == ["A.y0", "A.y1", "B.y0", "B.y1"]


def test_glue_refuses_non_glueable():
    with pytest.raises(ValueError):
        glue(diameter(1.0), diameter(1.0))


def inscribed(draw, budget):
    count = draw(st.integers(1, 4))
    radii = draw(st.lists(st.floats(0.0, 0.45), min_size=count, max_size=count))
    radii = [r if r > 0.02 else 0.0 for r in radii]
    floor = max(r * r for r in radii) + 0.005
    assume(floor < budget)
    sphere_sq = draw(st.floats(floor, budget))
    try:
        return inscribed_spacing(radii, [1 if r else 0 for r in radii], sphere_sq)
    except ValueError:
        assume(False)


@st.composite
def glueable_pairs(draw):
    """Either a constructed maximal spacing or an inscribed one, plus an inscribed partner that fits."""
    if draw(st.booleans()):
        sig, flavor = draw(st.sampled_from(SIGS))
        A = from_signature(sig, flavor, r=draw(st.floats(0.05, 0.7)))
    else:
        A = inscribed(draw, 0.6)
    extA = extent(A)
    assume(extA.finite and extA.squared < 0.98)
    B = inscribed(draw, 0.99 - extA.squared)
    return A, B


@given(glueable_pairs())
def test_glue_matches_closed_forms(pair):
    A, B = pair
    extA, extB = extent(A), extent(B)
    emb = embed(A, B)
    G = emb.spacing
    assert validate(G, 1e-8)
    ext = extent(G, 1e-8)
    assert ext.finite
    assert ext.value == pytest.approx(glued_extent(extA.squared, extB.squared), abs=1e-10)
    site = glued_glue_site(emb.site_a, emb.site_b, extA.squared, extB.squared)
    np.testing.assert_allclose(ext.glue_site, site, atol=1e-8)
    assert verify(sample(G, 3, seed=0), 1e-8)
