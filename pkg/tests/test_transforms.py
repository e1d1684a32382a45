import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import small_signatures
from equispace.analytic import (
    SQRT_HALF,
    AnalyticSpacing,
    SphereClass,
    extent,
    from_signature,
    inner_classes,
    is_maximal,
    sample,
    sig_of,
    validate,
)
from equispace.gluing import glued_extent
from equispace.signatures import Signature
from equispace.transforms import (
    IsometryRecord,
    RigidStep,
    SquashStretchStep,
    align,
    apply_rigid,
    inner_radius_residual,
    isometric,
    outer_inner_squash_stretch,
    random_rigid,
    replay,
    solve_inner_radius,
    squash_targets,
    to_equilateral_normal_form,
)

SIGS = small_signatures(6)
DISTINCT = [s for s, f in SIGS if f == "distinct"]


def S(m, *d):
    return Signature(m, tuple(d))


def outer_positive(T):
    (inner,) = inner_classes(T)
    return [i for i, c in enumerate(T.classes) if c.dim and i != inner]


def on_spheres(Y, T, tol):
    """Every point lies on its class sphere inside its support."""
    if T.dimension == 0:
        return
    for cls, sph in zip(Y.classes, T.classes):
        rel = cls.points - sph.center
        assert np.abs(np.linalg.norm(rel, axis=1) - sph.radius).max() <= tol
        inside = rel @ sph.basis.T @ sph.basis if sph.dim else np.zeros_like(rel)
        assert np.abs(rel - inside).max() <= tol


def test_solve_inner_radius_examples():
    assert solve_inner_radius(0.5, 0.0) == pytest.approx(SQRT_HALF, abs=1e-15)
    r = solve_inner_radius(0.25, 0.0)
    assert r == pytest.approx(math.sqrt(2 / 3), abs=1e-12)
    assert abs(inner_radius_residual(r, 0.25, 0.0)) <= 1e-12
    r = solve_inner_radius(0.3, math.sqrt(0.1))
    assert abs(inner_radius_residual(r, 0.3, math.sqrt(0.1))) <= 1e-12


@pytest.mark.parametrize("ext_sq,r_outer", [(-0.1, 0.2), (0.6, 0.2), (0.3, SQRT_HALF), (0.3, -0.1)])
def test_solve_inner_radius_domain(ext_sq, r_outer):
    with pytest.raises(ValueError):
        solve_inner_radius(ext_sq, r_outer)


@given(st.floats(0.0, 0.5), st.floats(0.0, 0.7))
def test_solve_inner_radius_matches_closed_form(ext_sq, r_outer):
    # gluing the remainder to the outer class explains the equation:
    # 1 - r_I^2 is the squared extent of that gluing
    r = solve_inner_radius(ext_sq, r_outer)
    want = glued_extent(ext_sq, r_outer ** 2) ** 2
    assert 1 - r * r == pytest.approx(min(want, 0.5), abs=1e-10)
    assert SQRT_HALF - 1e-15 <= r < math.sqrt(1 - r_outer ** 2)


def test_squash_fixed_point():
    T = from_signature(S(1, 2, 1, 1), "distinct", r=0.4)
    i = outer_positive(T)[0]
    out = outer_inner_squash_stretch(T, i, 0.4)
    np.testing.assert_allclose(out.centers, T.centers, atol=1e-10)
    np.testing.assert_allclose(out.radii, T.radii, atol=1e-10)


def test_squash_symmetric_three_class():
    T = from_signature(S(0, 1, 1, 1), "distinct", r=0.5)
    (inner,) = inner_classes(T)
    assert T.radii[inner] == pytest.approx(math.sqrt(5 / 8), abs=1e-12)
    out = outer_inner_squash_stretch(T, outer_positive(T)[0], 0.3)
    assert validate(out, 1e-10)
    assert is_maximal(out)
    assert sig_of(out) == S(0, 1, 1, 1)
    assert sorted(out.radii)[:2] == pytest.approx([0.3, 0.5])


def test_squash_preconditions():
    T = from_signature(S(0, 1, 1, 1), "distinct", r=0.5)
    (inner,) = inner_classes(T)
    with pytest.raises(ValueError):
        outer_inner_squash_stretch(T, outer_positive(T)[0], SQRT_HALF)
    with pytest.raises(ValueError):
        outer_inner_squash_stretch(T, inner, 0.3)
    with pytest.raises(ValueError):
        outer_inner_squash_stretch(from_signature(S(0, 1, 1), "coincident"), 0, 0.3)


def test_squash_step_rejects_zero_factor():
    with pytest.raises(ValueError):
        SquashStretchStep(np.zeros((2, 1)), np.zeros((2, 1)), np.array([1.0, 0.0]))


@given(st.sampled_from(DISTINCT), st.floats(0.02, 0.68), st.data())
def test_squash_preserves_signature(sig, r, data):
    T = from_signature(sig, "distinct", r=r)
    outers = outer_positive(T)
    if not outers:
        return
    i = data.draw(st.sampled_from(outers))
    target = data.draw(st.floats(0.02, 0.68))
    out = outer_inner_squash_stretch(T, i, target)
    assert validate(out, 1e-9)
    assert is_maximal(out, 1e-9)
    assert sig_of(out, 1e-9) == sig
    assert out.radii[i] == pytest.approx(target)


def test_normal_form_reaches_constructed_representative():
    T = from_signature(S(1, 2, 1, 1), "distinct", r=0.3)
    out, record = to_equilateral_normal_form(T, r=0.5)
    assert sorted(out.radii[outer_positive(out)]) == pytest.approx([0.5, 0.5])
    ref = from_signature(S(1, 2, 1, 1), "distinct", r=0.5)
    assert align(out, ref).residual <= 1e-8


def test_normal_form_of_normal_input_is_rigid_only():
    T = from_signature(S(1, 2, 1, 1), "distinct", r=0.5)
    out, record = to_equilateral_normal_form(T, r=0.5)
    assert record.kinds() == ["rigid"]
    np.testing.assert_allclose(out.centers, T.centers, atol=1e-10)
    np.testing.assert_allclose(record.steps[0].rotation, np.eye(T.dimension), atol=1e-10)


def test_normal_form_coincident():
    T = from_signature(S(0, 2, 1, 1), "coincident")
    out, _ = to_equilateral_normal_form(random_rigid(T, np.random.default_rng(0)))
    np.testing.assert_allclose(out.radii, SQRT_HALF)
    np.testing.assert_allclose(out.centers, 0, atol=1e-10)


def test_normal_form_two_coincident_classes_equalizes_radii():
    # the r1^2 + r2^2 = 1 family: (sqrt(3)/2, 1/2) normalizes to sqrt(1/2) each
    lopsided = AnalyticSpacing(3, (
        SphereClass((1, 1, 1), math.sqrt(0.75), [(1, 0, 0), (0, 1, 0)]),
        SphereClass((1, 1, 1), 0.5, [(0, 0, 1)]),
    ))
    assert is_maximal(lopsided)
    out, record = to_equilateral_normal_form(lopsided)
    np.testing.assert_allclose(out.radii, SQRT_HALF)
    assert record.kinds() == ["squash_stretch", "rigid"]
    on_spheres(replay(record, sample(lopsided, 8)), out, 1e-9)


def test_normal_form_rejects_non_maximal():
    padded = from_signature(S(0, 1, 1), "coincident", dims_slack=1)
    with pytest.raises(ValueError):
        to_equilateral_normal_form(padded)


def test_isometric_examples():
    assert isometric(from_signature(S(0, 2, 1), "coincident", r=0.2), from_signature(S(0, 2, 1), "coincident", r=0.45))
    a = from_signature(S(0, 2, 1), "coincident")
    b = from_signature(S(0, 1, 1, 1), "coincident")
    assert a.dimension == b.dimension == 3
    assert not isometric(a, b)
    assert isometric(a, a)


def test_isometric_distinguishes_inner_dimension():
    a = from_signature(S(1, 2, 1), "distinct")
    b = from_signature(S(1, 1, 2), "distinct")
    assert a.dimension == b.dimension
    assert not isometric(a, b)


@given(st.sampled_from(SIGS), st.floats(0.05, 0.65), st.floats(0.05, 0.65), st.integers(0, 2**31))
def test_normal_form_properties(sig_flavor, r0, r, seed):
    sig, flavor = sig_flavor
    rng = np.random.default_rng(seed)
    T = from_signature(sig, flavor, r=r0)
    if flavor == "distinct" and outer_positive(T):
        T = squash_targets(T, rng.uniform(0.05, 0.65, len(outer_positive(T))))
    T = random_rigid(T, rng)
    out, record = to_equilateral_normal_form(T, r)
    assert validate(out, 1e-8) and is_maximal(out, 1e-8)
    assert sig_of(out, 1e-8) == sig
    ref = from_signature(sig, flavor, r=r)
    assert align(out, ref, 1e-8).residual <= 1e-8
    # idempotent up to a rigid motion
    again, _ = to_equilateral_normal_form(out, r, 1e-8)
    assert align(again, out, 1e-8).residual <= 1e-8
    # the record carries sample points onto the output spheres
    on_spheres(replay(record, sample(T, 5, seed=seed % 1000)), out, 1e-8)


def test_apply_rigid_round_trip():
    T = from_signature(S(2, 2), "distinct")
    rng = np.random.default_rng(5)
    moved = random_rigid(T, rng)
    a = align(moved, T)
    back = apply_rigid(moved, a.rotation, a.translation)
    np.testing.assert_allclose(back.centers, T.centers, atol=1e-10)
    record = IsometryRecord((RigidStep(a.rotation, a.translation),))
    on_spheres(replay(record, sample(moved, 6)), T, 1e-10)
