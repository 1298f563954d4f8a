"""Weighted integrals over the unit ball of C^n.

Two independent routes:

* a series engine for integrands of the form
  ``(1-|t|^2)^mu * F(t, conj t) / ((1-<z,t>)^a (1-<w,t>)^b)`` with F a polynomial in
  t and conj(t).  The denominators are expanded as power series in conj(t) and
  every monomial pair is integrated with the exact moment formula;
* plain Monte Carlo with uniform samples, used as an oracle.

Here <z, t> = sum_j z_j conj(t_j).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable

import numpy as np

from .ball import as_point
from .config import DEFAULTS, thread_count
from .errors import ConvergenceError, DivergentWeightError, DomainError
from .exact import MultiIndex, PiScalar, moment
from .symdiff import SymDiff

__all__ = [
    "SeriesResult",
    "MCResult",
    "BiPoly",
    "bipoly_mul",
    "bipoly_pow",
    "integrate_bipoly",
    "series_integrate",
    "gradient_factors",
    "contract_numerator",
    "theta_numerator",
    "theta_series",
    "mc_integrate",
    "sample_ball",
    "ball_volume",
]

# keys are P + Q (concatenated exponent tuples for t and conj t)
BiPoly = dict


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    tail_bound: float
    degree_used: int


@dataclass(frozen=True)
class MCResult:
    estimate: complex
    stderr: float
    samples: int
    seed: int


def _add_keys(k1, k2):
    return tuple(a + b for a, b in zip(k1, k2))


def bipoly_mul(p: BiPoly, q: BiPoly) -> BiPoly:
    out: BiPoly = {}
    for k1, c1 in p.items():
        for k2, c2 in q.items():
            k = _add_keys(k1, k2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c != 0}


def bipoly_pow(p: BiPoly, e: int, n: int) -> BiPoly:
    out: BiPoly = {(0,) * (2 * n): 1}
    for _ in range(e):
        out = bipoly_mul(out, p)
    return out


def integrate_bipoly(poly: BiPoly, n: int, mu: int) -> PiScalar:
    """Exact integral of sum c_{PQ} t^P conj(t)^Q (1-|t|^2)^mu for rational coefficients."""
    total = PiScalar(Fraction(0), n)
    for key, c in poly.items():
        P, Q = key[:n], key[n:]
        if P == Q:
            total = total + Fraction(c) * moment(n, mu, P, Q)
    return total


@lru_cache(maxsize=None)
def _moment_float(n: int, mu: int, P: tuple) -> float:
    return float(moment(n, mu, P, P))


def _rising(a: int, k: int) -> int:
    return factorial(a + k - 1) // factorial(a - 1) if a > 0 else (1 if k == 0 else 0)


def _series_coefficients(n: int, z: np.ndarray, a: int, w: np.ndarray, b: int):
    """Coefficient of conj(t)^R in (1-<z,t>)^-a (1-<w,t>)^-b, memoised per R."""
    cache = {}

    def coeff(R: tuple) -> complex:
        if R in cache:
            return cache[R]
        total = 0j
        for A in np.ndindex(*(r + 1 for r in R)):
            B = tuple(r - x for r, x in zip(R, A))
            sa, sb = sum(A), sum(B)
            if (a == 0 and sa) or (b == 0 and sb):
                continue
            term = _rising(a, sa) * _rising(b, sb) / (MultiIndex(A).factorial * MultiIndex(B).factorial)
            for j in range(n):
                if A[j]:
                    term = term * z[j] ** A[j]
                if B[j]:
                    term = term * w[j] ** B[j]
            total += term
        cache[R] = total
        return total

    return coeff


def series_integrate(
    numer: BiPoly,
    n: int,
    mu: int,
    z=None,
    a: int = 0,
    w=None,
    b: int = 0,
    tol: float = DEFAULTS.series_tol,
    start_degree: int | None = None,
    degree_cap: int = DEFAULTS.series_degree_cap,
) -> SeriesResult:
    """Integral of (1-|t|^2)^mu numer(t, conj t) / ((1-<z,t>)^a (1-<w,t>)^b) dV.

    The conj(t)-series of the denominator is kept up to degree D.  A term of
    degree |R| only survives integration against t^P conj(t)^Q when P = Q + R, so
    the discarded terms are finitely many; their absolute sum is the reported
    tail bound.  D starts at ``start_degree`` and doubles until the bound is
    below ``tol``.
    """
    if mu < 0:
        raise DivergentWeightError(f"weight exponent {mu} < 0: the integral diverges")
    if tol <= 0:
        raise DomainError("tol must be positive")
    z = np.zeros(n, dtype=complex) if z is None else np.asarray(z, dtype=complex)
    w = np.zeros(n, dtype=complex) if w is None else np.asarray(w, dtype=complex)
    coeff = _series_coefficients(n, z, a, w, b)

    by_degree: dict[int, list[complex]] = {}
    for key, c in numer.items():
        P, Q = key[:n], key[n:]
        R = tuple(p - q for p, q in zip(P, Q))
        if min(R, default=0) < 0:
            continue
        s = sum(R)
        if s and a == 0 and b == 0:
            continue
        term = complex(c) * coeff(R) * _moment_float(n, mu, P)
        if term != 0:
            by_degree.setdefault(s, []).append(term)

    needed = max(by_degree, default=0)
    D = start_degree if start_degree is not None else (a + b + 10)
    while True:
        tail = math.fsum(abs(t) for s, ts in by_degree.items() if s > D for t in ts)
        if tail < tol:
            break
        if D >= degree_cap:
            raise ConvergenceError(
                f"series tail {tail:.3e} still above tol {tol:.1e} at degree cap {degree_cap}", tail
            )
        D = min(2 * D, degree_cap)
    kept = [t for s, ts in sorted(by_degree.items()) if s <= D for t in ts]
    value = complex(math.fsum(t.real for t in kept), math.fsum(t.imag for t in kept))
    return SeriesResult(value, tail, min(D, needed))


def _linear_bar(coeffs, n: int) -> BiPoly:
    """sum_k coeffs[k] conj(t_k)."""
    out = {}
    for k in range(n):
        if coeffs[k] != 0:
            key = [0] * (2 * n)
            key[n + k] = 1
            out[tuple(key)] = coeffs[k]
    return out


def gradient_factors(z: np.ndarray, w: np.ndarray, n_slice: int) -> list[BiPoly]:
    """Numerators num_i, one per ambient coordinate, as polynomials in the slice variables.

    grad phi_i = (1-|t|^2) num_i / ((1-<z,t>)(1-<w,t>)) with
    num_i = (w_i - z_i) + t_i <z - w, t> + z_i <w, t> - w_i <z, t>,
    where t lies in the coordinate slice C^n_slice x {0}.
    """
    n = n_slice
    zs, ws = z[:n], w[:n]
    factors = []
    for i in range(z.size):
        f: BiPoly = {}
        const = w[i] - z[i]
        if const != 0:
            f[(0,) * (2 * n)] = const
        for k, c in _linear_bar([z[i] * ws[k] - w[i] * zs[k] for k in range(n)], n).items():
            f[k] = f.get(k, 0) + c
        if i < n:
            for k in range(n):
                c = zs[k] - ws[k]
                if c != 0:
                    key = [0] * (2 * n)
                    key[i] = 1
                    key[n + k] = 1
                    f[tuple(key)] = f.get(tuple(key), 0) + c
        factors.append(f)
    return factors


def contract_numerator(terms, factors: list[BiPoly], n_slice: int) -> BiPoly:
    """sum over (I, p) in ``terms`` of p(t) prod_i factors[i]^{I_i}."""
    n = n_slice
    powers = [{0: {(0,) * (2 * n): 1}} for _ in factors]

    def power(i, e):
        if e not in powers[i]:
            powers[i][e] = bipoly_mul(power(i, e - 1), factors[i])
        return powers[i][e]

    total: BiPoly = {}
    for I, p in terms:
        prod = {tuple(K) + (0,) * n: c for K, c in p.coeffs.items()}
        for i, e in enumerate(I):
            if e:
                prod = bipoly_mul(prod, power(i, e))
        for k, c in prod.items():
            total[k] = total.get(k, 0) + c
    return {k: c for k, c in total.items() if c != 0}


def theta_numerator(psi: SymDiff, z: np.ndarray, w: np.ndarray) -> BiPoly:
    """sum_I psi_I(t) prod_i num_i^{I_i} for the full ball (see gradient_factors)."""
    return contract_numerator(psi.terms.items(), gradient_factors(z, w, psi.n), psi.n)


def theta_series(psi: SymDiff, z, w, tol: float = DEFAULTS.series_tol) -> SeriesResult:
    """Integral of <(grad phi_{z,w})^N, psi> dV_g by the series engine."""
    n, N = psi.n, psi.N
    if N < n + 1:
        raise DivergentWeightError(f"N={N} must be >= n+1={n + 1} for the weight to be integrable")
    z, w = as_point(z), as_point(w)
    if z.size != n or w.size != n:
        raise DomainError("z, w must have the dimension of psi")
    for name, p in (("z", z), ("w", w)):
        if np.linalg.norm(p) > DEFAULTS.max_radius + 1e-15:
            raise DomainError(f"|{name}| = {np.linalg.norm(p):.4f} exceeds the admissible radius {DEFAULTS.max_radius}")
    numer = theta_numerator(psi, z, w)
    return series_integrate(numer, n, N - n - 1, z=z, a=N, w=w, b=N, tol=tol, start_degree=N + 10)


def ball_volume(n: int) -> float:
    return math.pi**n / math.factorial(n)


def sample_ball(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    """``size`` uniform samples from the unit ball of C^n, shape (size, n)."""
    g = rng.standard_normal((size, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = rng.random(size) ** (1.0 / (2 * n))
    g *= r[:, None]
    return g[:, :n] + 1j * g[:, n:]


def _block_stats(f, n: int, mu: int, seed: int, block: int, size: int):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
    tau = sample_ball(rng, n, size)
    vals = np.asarray(f(tau), dtype=complex)
    if mu:
        vals = vals * (1.0 - np.einsum("ij,ij->i", tau, tau.conj()).real) ** mu
    mean = vals.mean()
    m2 = float(np.sum(np.abs(vals - mean) ** 2))
    return size, mean, m2


def mc_integrate(
    f: Callable[[np.ndarray], np.ndarray],
    n: int,
    mu: int,
    samples: int,
    seed: int,
    block_size: int = DEFAULTS.mc_block,
) -> MCResult:
    """Monte Carlo estimate of the integral of f(t) (1-|t|^2)^mu over the ball.

    ``f`` maps an (S, n) array of points to S complex values.  Samples are drawn
    in fixed blocks, each with its own seed stream, and block statistics are
    merged in block order, so the result does not depend on the thread count.
    """
    if mu < 0:
        raise DivergentWeightError("mu must be >= 0")
    if samples < 1:
        raise DomainError("samples must be >= 1")
    sizes = [block_size] * (samples // block_size)
    if samples % block_size:
        sizes.append(samples % block_size)

    def run(args):
        k, size = args
        return _block_stats(f, n, mu, seed, k, size)

    workers = min(thread_count(), len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(run, enumerate(sizes)))
    else:
        stats = [run(a) for a in enumerate(sizes)]

    count, mean, m2 = 0, 0j, 0.0
    for nb, mb, m2b in stats:
        total = count + nb
        delta = mb - mean
        mean = mean + delta * nb / total
        m2 = m2 + m2b + abs(delta) ** 2 * count * nb / total
        count = total
    vol = ball_volume(n)
    var = m2 / (count - 1) if count > 1 else 0.0
    return MCResult(complex(vol * mean), float(vol * math.sqrt(var / count)), count, seed)
