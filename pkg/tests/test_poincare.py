import math

import numpy as np
import pytest

from ballcorr.ball import MoebiusMap, random_automorphism, random_ball_point
from ballcorr.errors import DomainError
from ballcorr.poincare import (
    GroupWordSet,
    constant_ratio_table,
    partial_poincare_sum,
    per_gamma_identity,
)


def test_word_set_contains_identity_and_dedups_involutions():
    t = MoebiusMap.involution([0.3, 0.1j])
    words = GroupWordSet([t], 4)
    assert len(words) == 2
    assert words.tiers[0][0].distance(MoebiusMap.identity(2)) == 0


def test_word_set_growth():
    gens = [random_automorphism(1, 2), random_automorphism(2, 2)]
    assert [len(t) for t in GroupWordSet(gens, 2).tiers] == [1, 4, 12]


def test_word_set_validation():
    with pytest.raises(DomainError):
        GroupWordSet([], 1, n=2)
    with pytest.raises(DomainError):
        GroupWordSet([], 0)
    with pytest.raises(DomainError):
        GroupWordSet([random_automorphism(1, 2), random_automorphism(1, 3)], 1)


def test_partial_sum_identity_only():
    z, w = np.array([0.2, 0.1j]), np.array([-0.1, 0.3])
    sums = partial_poincare_sum(GroupWordSet([], 0, n=2), 1, 3, z, w).sums
    assert sums == [pytest.approx((z[0] - w[0]) ** 3)]


def test_partial_sum_two_elements():
    g = MoebiusMap.involution([0.4, 0.2])
    z, w = np.array([0.2, 0.1j]), np.array([-0.1, 0.3])
    sums = partial_poincare_sum(GroupWordSet([g], 3), 2, 4, z, w).sums
    assert sums[-1] == pytest.approx((z[1] - w[1]) ** 4 + (g(z)[1] - g(w)[1]) ** 4)


def test_partial_sum_vanishes_on_diagonal():
    words = GroupWordSet([random_automorphism(3, 2)], 2)
    z = np.array([0.2, -0.3j])
    assert all(s == 0 for s in partial_poincare_sum(words, 1, 3, z, z).sums)


def test_partial_sum_reordering_invariance():
    words = GroupWordSet([random_automorphism(4, 2), random_automorphism(5, 2)], 2)
    z, w = np.array([0.2, 0.1j]), np.array([-0.1, 0.3])
    base = partial_poincare_sum(words, 1, 3, z, w, v=[1.0, 0.5j], tau=[0.1, 0.2])
    object.__setattr__(words, "tiers", [list(reversed(t)) for t in words.tiers])
    again = partial_poincare_sum(words, 1, 3, z, w, v=[1.0, 0.5j], tau=[0.1, 0.2])
    assert base == again


def test_pullback_partial_sums_require_tau():
    with pytest.raises(DomainError):
        partial_poincare_sum(GroupWordSet([], 0, n=2), 1, 3, [0, 0], [0.1, 0], v=[1, 0])


def test_per_gamma_identity_for_identity_map():
    r = per_gamma_identity(MoebiusMap.identity(2), 1, 2, 3, [0, 0], [0.4, 0], samples=200_000, seed=2)
    assert r.rhs == pytest.approx(math.pi**2 / 5 * 0.4**3)
    assert r.residual <= 3 * r.stderr


def test_per_gamma_identity_unitary():
    U = np.array([[0, 1], [1, 0]], dtype=complex)
    g = MoebiusMap.linear(U)
    z, w = np.array([0.1, 0.2]), np.array([-0.2j, 0.3])
    r = per_gamma_identity(g, 1, 2, 3, z, w, samples=200_000, seed=3)
    assert r.rhs == pytest.approx(math.pi**2 / 5 * (w[1] - z[1]) ** 3)
    assert r.residual <= max(3 * r.stderr, 1e-4)


@pytest.mark.parametrize("n,N", [(2, 3), (2, 4), (3, 4)])
def test_per_gamma_identity_random(n, N):
    rng = np.random.default_rng(7 * n + N)
    for k in range(3):
        g = random_automorphism(int(rng.integers(2**31)), n)
        z, w = random_ball_point(rng, n, 0.5), random_ball_point(rng, n, 0.5)
        r = per_gamma_identity(g, 1 + k % n, n, N, z, w, seed=k)
        assert r.residual <= max(3 * r.stderr, 1e-4)


def test_per_gamma_identity_domain():
    with pytest.raises(DomainError):
        per_gamma_identity(MoebiusMap.identity(1), 1, 1, 2, [0], [0.1])
    with pytest.raises(DomainError):
        per_gamma_identity(MoebiusMap.identity(2), 3, 2, 3, [0, 0], [0.1, 0])


def test_constant_ratio_table():
    rows = {(r["n"], r["N"]): r for r in constant_ratio_table([(2, 3), (3, 5)])}
    assert rows[(2, 3)]["ratio"] == "12/5"
    assert rows[(2, 3)]["computed"] == "1"
