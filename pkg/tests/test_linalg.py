import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from equispace.linalg import (
    NoCommonSphere,
    affine_frame,
    aligning_rotation,
    bases_orthogonal,
    circumcenter,
    complete_basis,
    gram_schmidt,
    project,
    reflect,
    regular_simplex,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_gram_schmidt_independent_axes():
    np.testing.assert_allclose(gram_schmidt([(1, 0), (1, 1)]), [(1, 0), (0, 1)], atol=1e-15)


def test_gram_schmidt_collinear_rank_one():
    h = math.sqrt(0.5)
    np.testing.assert_allclose(gram_schmidt([(1, 1, 0), (2, 2, 0)]), [(h, h, 0)], atol=1e-15)


def test_gram_schmidt_empty():
    assert gram_schmidt([], dim=3).shape == (0, 3)


def test_gram_schmidt_ignores_roundoff_sized_vectors():
    # differences of nearly equal centers must not become directions
    assert gram_schmidt([(1e-16, -2e-16, 0)]).shape[0] == 0


@given(arrays(float, (5, 4), elements=finite))
def test_gram_schmidt_orthonormal_and_spanning(V):
    Q = gram_schmidt(V)
    np.testing.assert_allclose(Q @ Q.T, np.eye(Q.shape[0]), atol=1e-9)
    # rank measured on the same relative scale gram_schmidt uses
    scale = np.linalg.norm(V, axis=1).max()
    rank_tol = 1e-10 * (scale if scale > 1e-12 else 1.0)
    assert Q.shape[0] <= np.linalg.matrix_rank(V, tol=rank_tol) + 1
    # every input lies in the span, up to the dropping threshold
    resid = V - (V @ Q.T) @ Q
    assert np.abs(resid).max() <= 1e-7 * max(1.0, np.linalg.norm(V, axis=1).max())


def test_affine_frame_examples():
    f = affine_frame([(0, 0), (1, 0)])
    np.testing.assert_array_equal(f.base, (0, 0))
    np.testing.assert_allclose(f.basis, [(1, 0)])
    single = affine_frame([(5, 5)])
    np.testing.assert_array_equal(single.base, (5, 5))
    assert single.dim == 0
    assert affine_frame([(0, 0), (1, 0), (0, 1)]).dim == 2


def test_project_examples():
    axis = affine_frame([(0, 0), (1, 0)])
    np.testing.assert_allclose(project((3, 4), axis), (3, 0))
    f3 = affine_frame([(0, 0, 0), (1, 0, 0)])
    np.testing.assert_allclose(project((1, 1, 1), f3), (1, 0, 0))


@given(arrays(float, (3, 3), elements=finite), arrays(float, 3, elements=finite))
def test_project_is_idempotent(pts, p):
    f = affine_frame(pts)
    once = project(p, f)
    np.testing.assert_allclose(project(once, f), once, atol=1e-8)


def test_reflect_examples():
    np.testing.assert_allclose(reflect((1, 2), (0, 0)), (-1, -2))
    np.testing.assert_allclose(reflect((3, 7), (3, 7)), (3, 7))
    np.testing.assert_allclose(reflect((0, 0), (1, 0)), (2, 0))


def test_bases_orthogonal_examples():
    h = math.sqrt(0.5)
    assert bases_orthogonal([(1, 0)], [(0, 1)])
    assert not bases_orthogonal([(1, 0)], [(h, h)])
    assert bases_orthogonal(np.zeros((0, 2)), [(h, h)])


def test_circumcenter_examples(triangle):
    c, r = circumcenter([(0.5, 0), (-0.5, 0)])
    np.testing.assert_allclose(c, (0, 0))
    assert r == pytest.approx(0.5)
    c, r = circumcenter(triangle)
    assert r == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    with pytest.raises(NoCommonSphere):
        circumcenter([(0, 0), (1, 0), (3, 0)])


@pytest.mark.parametrize("vertices", [1, 2, 3, 4, 7])
def test_regular_simplex_edge_and_circumradius(vertices):
    X = regular_simplex(vertices, 2.0)
    D = np.linalg.norm(X[:, None] - X[None, :], axis=-1)
    off = D[~np.eye(vertices, dtype=bool)]
    np.testing.assert_allclose(off, 2.0)
    # independent circumradius: distance to the centroid
    expected = 2.0 * math.sqrt((vertices - 1) / (2 * vertices))
    np.testing.assert_allclose(np.linalg.norm(X - X.mean(0), axis=1), expected, atol=1e-12)


def test_complete_basis_is_orthonormal_completion():
    B = complete_basis([(1, 0, 0)])
    assert B.shape == (3, 3)
    np.testing.assert_allclose(B @ B.T, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(B[0], (1, 0, 0))


def test_aligning_rotation_identity():
    U = aligning_rotation([[(1, 0, 0)], [(0, 1, 0)]], [[(1, 0, 0)], [(0, 1, 0)]])
    np.testing.assert_allclose(U, np.eye(3), atol=1e-12)


def test_aligning_rotation_maps_axis():
    U = aligning_rotation([[(1, 0)]], [[(0, 1)]])
    np.testing.assert_allclose(U.T @ U, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(U @ (1, 0), (0, 1), atol=1e-12)
    assert np.linalg.det(U) == pytest.approx(1.0)


def test_aligning_rotation_swaps_two_lines_in_r3():
    e1, e2 = np.eye(3)[:2]
    U = aligning_rotation([[e1], [e2]], [[e2], [e1]])
    np.testing.assert_allclose(U.T @ U, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(np.abs(U @ e1), np.abs(e2), atol=1e-12)
    np.testing.assert_allclose(np.abs(U @ e2), np.abs(e1), atol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_aligning_rotation_random_frames(seed):
    rng = np.random.default_rng(seed)
    Qa, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    Qb, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    src = [Qa[:2], Qa[2:3]]
    dst = [Qb[:2], Qb[2:3]]
    U = aligning_rotation(src, dst)
    np.testing.assert_allclose(U.T @ U, np.eye(5), atol=1e-10)
    for a, b in zip(src, dst):
        image = a @ U.T
        # same span: projecting the image onto the target span loses nothing
        np.testing.assert_allclose(image @ b.T @ b, image, atol=1e-10)
