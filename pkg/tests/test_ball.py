import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballcorr.ball import (
    BallPoint,
    MoebiusMap,
    bergman_kernel,
    frame_metric,
    inverse_metric,
    metric,
    random_automorphism,
    random_ball_point,
    t_jacobian,
    t_map,
    unitary_frame,
    volume_weight,
)
from ballcorr.errors import DomainError

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 3)


def _points(seed, n, k, radius=0.9):
    rng = np.random.default_rng(seed)
    return [random_ball_point(rng, n, radius) for _ in range(k)]


def test_ball_point_validation():
    with pytest.raises(DomainError):
        BallPoint([1.0, 0.0])
    with pytest.raises(DomainError):
        BallPoint(np.zeros((2, 2)))
    p = BallPoint([0.1, 0.2j])
    assert p.n == 2 and p.norm2 == pytest.approx(0.05)
    assert p == BallPoint([0.1, 0.2j])


def test_bergman_kernel_at_origin():
    assert bergman_kernel([0, 0], [0.3, 0.1]) == 1
    assert bergman_kernel([0.5], [0.5]) == pytest.approx(1 / 0.75**2)


@settings(max_examples=60)
@given(seeds, dims)
def test_involution_and_center(seed, n):
    a, w = _points(seed, n, 2)
    assert np.allclose(t_map(a, t_map(a, w)), w, atol=1e-12)
    assert np.abs(t_map(a, a)).max() < 1e-12
    assert np.allclose(t_map(a, np.zeros(n)), a, atol=1e-15)


@settings(max_examples=60)
@given(seeds, dims)
def test_metric_inverse_and_frame(seed, n):
    (z,) = _points(seed, n, 1)
    G = metric(z)
    assert np.allclose(inverse_metric(z).T @ G, np.eye(n), atol=1e-12)
    assert np.allclose(frame_metric(unitary_frame(z)), G, rtol=1e-12, atol=1e-12)


@settings(max_examples=40)
@given(seeds, dims)
def test_jacobian_matches_finite_differences(seed, n):
    a, w = _points(seed, n, 2, 0.8)
    J = t_jacobian(a, w)
    h = 1e-6
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = h
        fd = (t_map(a, w + e) - t_map(a, w - e)) / (2 * h)
        assert np.allclose(J[:, k], fd, atol=1e-7)


@settings(max_examples=40)
@given(seeds, dims)
def test_kernel_transformation(seed, n):
    z, w = _points(seed, n, 2)
    g = random_automorphism(seed, n)
    lhs = bergman_kernel(g(z), g(w)) * np.linalg.det(g.jacobian(z)) * np.conj(np.linalg.det(g.jacobian(w)))
    assert lhs == pytest.approx(bergman_kernel(z, w), rel=1e-11)


@settings(max_examples=40)
@given(seeds, seeds, dims)
def test_composition_and_inverse(s1, s2, n):
    f, g = random_automorphism(s1, n), random_automorphism(s2, n)
    (w,) = _points(s1 ^ s2, n, 1)
    assert np.allclose((f @ g)(w), f(g(w)), atol=1e-11)
    assert np.allclose(f.inverse()(f(w)), w, atol=1e-11)
    assert (f @ f.inverse()).distance(MoebiusMap.identity(n)) < 1e-10


def test_identity_and_linear_maps():
    w = np.array([0.2, -0.1j])
    assert np.allclose(MoebiusMap.identity(2)(w), w)
    U = np.array([[0, 1], [1, 0]], dtype=complex)
    assert np.allclose(MoebiusMap.linear(U)(w), U @ w)
    assert np.allclose(MoebiusMap.involution([0.3, 0])(np.zeros(2)), [0.3, 0])


def test_non_unitary_rejected():
    with pytest.raises(DomainError):
        MoebiusMap(np.array([[2.0]]), np.zeros(1))


def test_random_automorphism_is_deterministic():
    a, b = random_automorphism(5, 3), random_automorphism(5, 3)
    assert a.distance(b) == 0
    assert np.linalg.norm(a.center) <= 0.8


def test_volume_weight():
    assert volume_weight([0.0, 0.0]) == 1
    assert volume_weight([0.5]) == pytest.approx(0.75**-2)
