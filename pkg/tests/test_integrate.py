import math

import numpy as np
import pytest

from ballcorr.ball import random_ball_point
from ballcorr.correspondence import theta_integrand
from ballcorr.errors import ConvergenceError, DivergentWeightError, DomainError
from ballcorr.exact import PiScalar, moment
from ballcorr.integrate import (
    ball_volume,
    integrate_bipoly,
    mc_integrate,
    sample_ball,
    series_integrate,
    theta_series,
)
from ballcorr.symdiff import SymDiff, random_symdiff


def test_theta_series_one_variable_example():
    res = theta_series(SymDiff.dtau_power(1, 1, 2), [0], [0.5], 1e-10)
    assert res.value == pytest.approx(math.pi / 12, abs=1e-14)
    assert res.tail_bound < 1e-10


def test_theta_series_two_variables_example():
    res = theta_series(SymDiff.dtau_power(2, 1, 3), [0, 0], [0.4, 0])
    assert res.value == pytest.approx(math.pi**2 / 5 * 0.064, abs=1e-14)


def test_theta_series_vanishes_on_diagonal(rng):
    psi = random_symdiff(rng, 2, 3)
    z = random_ball_point(rng, 2, 0.8)
    assert abs(theta_series(psi, z, z).value) < 1e-13


def test_theta_series_preconditions():
    with pytest.raises(DivergentWeightError):
        theta_series(SymDiff.dtau_power(2, 1, 2), [0, 0], [0.1, 0])
    with pytest.raises(DomainError):
        theta_series(SymDiff.dtau_power(1, 1, 2), [0], [0.95])


def test_theta_series_is_linear(rng):
    a, b = random_symdiff(rng, 2, 3), random_symdiff(rng, 2, 3)
    z, w = random_ball_point(rng, 2, 0.6), random_ball_point(rng, 2, 0.6)
    s, t = 0.3 - 1.2j, 2.5
    lhs = theta_series(s * a + t * b, z, w).value
    rhs = s * theta_series(a, z, w).value + t * theta_series(b, z, w).value
    assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs))


def test_series_degree_cap_raises():
    # a single surviving term of conj-degree 2 cannot be kept below degree 1
    numer = {(2, 0): 1.0}
    with pytest.raises(ConvergenceError) as err:
        series_integrate(numer, 1, 0, w=np.array([0.5]), b=1, tol=1e-30, start_degree=1, degree_cap=1)
    assert err.value.best_bound > 0


def test_series_tail_accounting():
    numer = {(2, 0): 1.0, (0, 0): 1.0}
    full = series_integrate(numer, 1, 0, w=np.array([0.5]), b=1, tol=1e-12, start_degree=1, degree_cap=8)
    cut = series_integrate(numer, 1, 0, w=np.array([0.5]), b=1, tol=1.0, start_degree=1, degree_cap=8)
    assert full.tail_bound == 0 and cut.degree_used == 1
    assert abs(full.value - cut.value) <= cut.tail_bound * (1 + 1e-12)


def test_integrate_bipoly_exact():
    # (1 - |t|^2)^1 (1 + |t|^2) over the disc: pi/2 + pi/6
    val = integrate_bipoly({(0, 0): 1, (1, 1): 1}, 1, 1)
    assert val == PiScalar(2, 1) / 3


@pytest.mark.parametrize(
    "f,n,mu,expected",
    [
        (lambda t: np.ones(len(t)), 1, 0, math.pi),
        (lambda t: np.ones(len(t)), 2, 1, math.pi**2 / 6),
        (lambda t: np.abs(t[:, 0]) ** 2, 1, 0, math.pi / 2),
    ],
)
def test_mc_examples(f, n, mu, expected):
    res = mc_integrate(f, n, mu, 200_000, seed=11)
    assert abs(res.estimate - expected) <= 3 * res.stderr or res.stderr == 0 and res.estimate == pytest.approx(expected)


def test_mc_constant_has_zero_stderr():
    res = mc_integrate(lambda t: np.ones(len(t)), 3, 0, 1000, 1)
    assert res.stderr == 0 and res.estimate == pytest.approx(ball_volume(3))


def test_mc_is_deterministic_and_thread_independent(monkeypatch, rng):
    psi = random_symdiff(rng, 2, 3)
    f = theta_integrand(psi, [0.1, 0.2j], [-0.3, 0.1])
    monkeypatch.setenv("BALLCORR_THREADS", "1")
    a = mc_integrate(f, 2, 0, 50_000, 9)
    b = mc_integrate(f, 2, 0, 50_000, 9)
    monkeypatch.setenv("BALLCORR_THREADS", "4")
    c = mc_integrate(f, 2, 0, 50_000, 9)
    assert a == b == c


def test_mc_rejects_bad_arguments():
    with pytest.raises(DivergentWeightError):
        mc_integrate(lambda t: t[:, 0], 1, -1, 10, 0)
    with pytest.raises(DomainError):
        mc_integrate(lambda t: t[:, 0], 1, 0, 0, 0)


def test_samples_are_in_ball():
    pts = sample_ball(np.random.default_rng(0), 3, 10_000)
    assert np.all(np.linalg.norm(pts, axis=1) < 1)


def test_mc_moment_agreement():
    P = (1, 2)
    res = mc_integrate(lambda t: np.abs(t[:, 0]) ** 2 * np.abs(t[:, 1]) ** 4, 2, 1, 400_000, 3)
    assert abs(res.estimate - float(moment(2, 1, P, P))) <= 3 * res.stderr


@pytest.mark.parametrize("case", range(20))
def test_series_agrees_with_mc(case):
    rng = np.random.default_rng(1000 + case)
    n = 1 + case % 2
    N = n + 1 + (case // 2) % 2
    psi = random_symdiff(rng, n, N, max_degree=2)
    z, w = random_ball_point(rng, n, 0.6), random_ball_point(rng, n, 0.6)
    ser = theta_series(psi, z, w)
    mc = mc_integrate(theta_integrand(psi, z, w), n, N - n - 1, 100_000, case)
    assert abs(ser.value - mc.estimate) <= max(3 * mc.stderr, ser.tail_bound + 3 * mc.stderr)
