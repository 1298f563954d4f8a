"""Normalising series d_{alpha,m} and assembly of the weighted kernel from a finite basis."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .config import DEFAULTS
from .correspondence import phi
from .errors import ConvergenceError, DomainError
from .integrate import theta_series
from .symdiff import SymDiff

__all__ = [
    "DAlphaParams",
    "d_alpha_m",
    "d_alpha_prefactor",
    "kernel_assemble",
    "kernel_head",
    "theta_double_integral_check",
    "basis_from_json",
    "basis_to_json",
]

_CHUNK = 1 << 16


@dataclass(frozen=True)
class DAlphaParams:
    n: int
    m: int
    alpha: float
    tol: float = DEFAULTS.series_tol

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be >= 1")
        if self.m < 0:
            raise DomainError("m must be >= 0")
        if not self.alpha > -1:
            raise DomainError(f"alpha must be > -1, got {self.alpha}")
        if not self.tol > 0:
            raise DomainError("tol must be positive")


def d_alpha_prefactor(n: int, m: int, alpha: float) -> float:
    """pi^n 4^n / n! * Gamma(n+alpha+1) Gamma(m+1) / Gamma(m+n+alpha+1)."""
    log_ratio = gammaln(n + alpha + 1) + gammaln(m + 1) - gammaln(m + n + alpha + 1)
    return math.pi**n * 4**n / math.factorial(n) * math.exp(log_ratio)


def _tail_brackets(n: int, m: int, alpha: float) -> tuple[int, float, float]:
    """(L1, beta_lo, beta_hi) such that for every L >= L1 the remainder sum_{k>=L} t_k
    lies between t_L (L + beta_lo)/(alpha+1) and t_L (L + beta_hi)/(alpha+1).

    With u_k = t_k (k + beta)/(alpha+1), u_k - u_{k+1} >= t_k (resp. <= t_k) holds for
    all large k when D(k)(k + beta - alpha - 1) - N(k)(k + 1 + beta) >= 0 (resp. <= 0),
    where r_k = N(k)/D(k) is the term ratio.  Both sides agree in degrees 4 and 3, so
    the condition is a quadratic in k whose leading coefficient is linear in beta.
    Telescoping then brackets the remainder since u_k -> 0.
    """
    A = n + m + alpha + 1
    D = np.polymul(np.polymul([1.0, A], [1.0, 2.0 * m]), [1.0, 1.0])
    N = np.polymul(np.polymul([1.0, m], [1.0, m]), [1.0, m + n])
    E = np.polysub(np.polymul(D, [1.0, -alpha - 1.0]), np.polymul(N, [1.0, 1.0]))[2:]
    G = np.polysub(D, N)[1:]  # (alpha+2) k^2 + ...
    beta_star = -E[0] / G[0]
    lo, hi = beta_star - 1.0, beta_star + 1.0
    start = 0.0
    for beta in (lo, hi):
        roots = np.roots(E + beta * G)
        real = [r.real for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r))]
        start = max([start] + real)
    L1 = max(1, int(math.floor(start)) + 2, int(math.ceil(-lo)) + 1)
    return L1, lo, hi


def d_alpha_m(p: DAlphaParams, term_cap: int = DEFAULTS.d_alpha_term_cap) -> tuple[float, float]:
    """(value, tail_bound) for d_{alpha,m}.

    Terms t_l = (m)_l^2 (m+n)_l / ((n+m+alpha+1)_l (2m)_l l!) are summed in
    blocks.  Past the point where the remainder is bracketed (see _tail_brackets)
    the midpoint of the bracket is added and its half width, times the prefactor,
    is the reported bound; summation stops once that is below ``tol``.
    """
    n, m, alpha = p.n, p.m, p.alpha
    if m == 0:
        return math.pi**n * 4**n / math.factorial(n), 0.0
    pref = d_alpha_prefactor(n, m, alpha)
    L1, beta_lo, beta_hi = _tail_brackets(n, m, alpha)
    A = n + m + alpha + 1

    partial = 0.0
    term = 1.0  # t_0
    start = 0
    best = math.inf
    while start < term_cap:
        ell = np.arange(start, start + _CHUNK, dtype=float)
        ratios = (ell + m) ** 2 * (ell + m + n) / ((ell + A) * (ell + 2 * m) * (ell + 1))
        terms = term * np.concatenate([[1.0], np.cumprod(ratios[:-1])])
        prefix = np.concatenate([[0.0], np.cumsum(terms)])
        for L in range(max(start, L1), start + _CHUNK, 64):
            head = partial + float(prefix[L - start])
            tL = float(terms[L - start])
            half = pref * tL * (beta_hi - beta_lo) / (2.0 * (alpha + 1.0))
            best = min(best, half)
            if half < p.tol:
                mid = tL * (L + 0.5 * (beta_lo + beta_hi)) / (alpha + 1.0)
                return pref * (head + mid), half
        partial += math.fsum(terms)
        term = float(terms[-1] * ratios[-1])
        start += _CHUNK
    raise ConvergenceError(f"d_alpha series: bound {best:.3e} above tol {p.tol:.1e} after {term_cap} terms", best)


def kernel_head(n: int, vol_sigma: float) -> float:
    """n! / (pi^n 4^n vol)."""
    if not vol_sigma > 0:
        raise DomainError("volume must be positive")
    return math.factorial(n) / (math.pi**n * 4**n * vol_sigma)


def _phi_at(psi: SymDiff, point, tol):
    if psi.N < psi.n + 1:
        raise DomainError(
            f"basis degree {psi.N} <= n={psi.n}: the integral transform is not defined there, "
            "supply only degrees m >= n+1"
        )
    z, w = point
    return phi(psi, z, w, tol)


def kernel_assemble(
    basis: Sequence[tuple[SymDiff, int]],
    alpha: float,
    vol_sigma: float,
    p1,
    p2,
    tol: float = DEFAULTS.kernel_tol,
) -> complex:
    """head + sum over the basis of phi(psi)(p1) conj(phi(psi)(p2)) / d_{alpha,m}.

    The basis is taken as orthonormal without checking.  Only degrees m >= n+1 are
    accepted.
    """
    if not basis:
        return complex(kernel_head(_dim(p1), vol_sigma))
    n = basis[0][0].n
    total = complex(kernel_head(n, vol_sigma))
    d_cache: dict[int, float] = {}
    for psi, m in basis:
        if psi.n != n:
            raise DomainError("basis elements must share the dimension n")
        if psi.N != m:
            raise DomainError(f"declared degree {m} does not match the form's degree {psi.N}")
        if m < 1:
            raise DomainError("basis degrees must be >= 1")
        if m not in d_cache:
            d_cache[m] = d_alpha_m(DAlphaParams(n, m, alpha, tol))[0]
        a = _phi_at(psi, p1, tol)
        b = _phi_at(psi, p2, tol)
        total += a * np.conj(b) / d_cache[m]
    return complex(total)


def _dim(point) -> int:
    return np.asarray(point[0]).size


def theta_double_integral_check(psi: SymDiff, p1, p2, tol: float = DEFAULTS.series_tol) -> float:
    """Residual of the rank-one reduction of the nested double integral.

    With B = psi (x) conj(psi) the double integral separates into
    sum over I, K of S^I(p1) conj(S^K(p2)), where S^I is the transform of the
    single term psi_I dt^I.  It is compared with theta(psi)(p1) conj(theta(psi)(p2)).
    """
    if not psi.terms:
        return 0.0
    parts = {}
    for label, (z, w) in (("p1", p1), ("p2", p2)):
        parts[label] = [
            theta_series(SymDiff(psi.n, psi.N, {I: p}), z, w, tol).value for I, p in psi.terms.items()
        ]
    nested = sum(a * np.conj(b) for a in parts["p1"] for b in parts["p2"])
    direct = theta_series(psi, *p1, tol).value * np.conj(theta_series(psi, *p2, tol).value)
    return float(abs(nested - direct))


def basis_to_json(basis: Sequence[tuple[SymDiff, int]]) -> list:
    return [{"m": m, "psi": psi.to_json()} for psi, m in basis]


def basis_from_json(data) -> list[tuple[SymDiff, int]]:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return [(SymDiff.from_json(item["psi"]), int(item["m"])) for item in data]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed basis JSON: {exc}") from exc
