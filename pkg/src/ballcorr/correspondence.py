"""The gradient field of the two-point kernel and the integral transform built on it.

For z, w in the ball the field is

    grad_phi(t)_i = (1-|t|^2) [(t_i - z_i)/(1-<z,t>) + (w_i - t_i)/(1-<w,t>)]

and the transform of a symmetric differential psi of degree N is

    theta(psi)(z, w) = integral of <grad_phi(t)^N, psi(t)> dV_g(t),
    phi(psi) = c_const(n, N) * theta(psi).

Only the gradient is ever evaluated; the potential itself needs a branch of log.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import roots_jacobi

from .ball import as_point, inverse_metric
from .config import DEFAULTS
from .errors import ConvergenceError, DivergentWeightError, DomainError
from .exact import c_const, jet_coefficient
from .integrate import MCResult, SeriesResult, mc_integrate, theta_series
from .symdiff import PolyFunc, SymDiff, contract_power

__all__ = [
    "GradField",
    "grad_phi",
    "grad_phi_definition",
    "theta_integrand",
    "theta_mc",
    "theta",
    "phi",
    "phi_jet",
    "adachi_line_integral",
    "adachi_crosscheck",
]


@dataclass(frozen=True, eq=False)
class GradField:
    z: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        z, w = as_point(self.z), as_point(self.w)
        if z.size != w.size:
            raise DomainError("z and w must have the same dimension")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.z.size


def _pairings(field: GradField, tau: np.ndarray):
    # <z, t> = sum_j z_j conj(t_j)
    tc = tau.conj()
    return tc @ field.z, tc @ field.w


def grad_phi(field: GradField, tau) -> np.ndarray:
    """Closed-form gradient at ``tau``; vectorised over leading axes."""
    tau = np.asarray(tau, dtype=complex)
    az, aw = _pairings(field, tau)
    r = np.einsum("...j,...j->...", tau, tau.conj()).real
    inner = (tau - field.z) / (1.0 - az)[..., None] + (field.w - tau) / (1.0 - aw)[..., None]
    return (1.0 - r)[..., None] * inner


def grad_phi_definition(field: GradField, tau, h: float = 1e-3) -> np.ndarray:
    """Oracle: inverse metric applied to the dbar-derivative of log((1-<z,t>)/(1-<w,t>)).

    The dbar-derivative is taken by fourth-order central differences in the real
    and imaginary directions.
    """
    tau = as_point(tau)

    def f(t):
        az, aw = _pairings(field, t)
        return np.log(1.0 - az) - np.log(1.0 - aw)

    n = tau.size
    dbar = np.zeros(n, dtype=complex)
    for l in range(n):
        e = np.zeros(n, dtype=complex)
        e[l] = 1.0
        parts = []
        for step in (e * h, 1j * e * h):
            d = (-f(tau + 2 * step) + 8 * f(tau + step) - 8 * f(tau - step) + f(tau - 2 * step)) / (12 * h)
            parts.append(d)
        dbar[l] = 0.5 * (parts[0] + 1j * parts[1])
    return inverse_metric(tau) @ dbar


def theta_integrand(psi: SymDiff, z, w):
    """Pointwise integrand of theta against (1-|t|^2)^(N-n-1) dV, for Monte Carlo."""
    field = GradField(z, w)

    def f(tau):
        r = np.einsum("...j,...j->...", tau, tau.conj()).real
        v = grad_phi(field, tau) / (1.0 - r)[..., None]
        return contract_power(v, psi, tau)

    return f


def _check_degree(psi: SymDiff):
    if psi.N < psi.n + 1:
        raise DivergentWeightError(
            f"N={psi.N} must be >= n+1={psi.n + 1}: the weight (1-|t|^2)^(N-n-1) is not integrable"
        )


def theta_mc(psi: SymDiff, z, w, samples: int = DEFAULTS.mc_samples, seed: int = 0) -> MCResult:
    _check_degree(psi)
    return mc_integrate(theta_integrand(psi, z, w), psi.n, psi.N - psi.n - 1, samples, seed)


def theta(
    psi: SymDiff,
    z,
    w,
    method: str = "series",
    tol: float = DEFAULTS.series_tol,
    samples: int = DEFAULTS.mc_samples,
    seed: int = 0,
) -> complex:
    if method == "series":
        return theta_series(psi, z, w, tol).value
    if method == "mc":
        return theta_mc(psi, z, w, samples, seed).estimate
    raise DomainError(f"unknown method {method!r}; use 'series' or 'mc'")


def phi_series(psi: SymDiff, z, w, tol: float = DEFAULTS.series_tol) -> SeriesResult:
    res = theta_series(psi, z, w, tol)
    c = float(c_const(psi.n, psi.N))
    return SeriesResult(c * res.value, abs(c) * res.tail_bound, res.degree_used)


def phi(psi: SymDiff, z, w, tol: float = DEFAULTS.series_tol) -> complex:
    """c_const(n, N) * theta(psi)(z, w); ``tol`` bounds the error of theta."""
    return phi_series(psi, z, w, tol).value


def phi_jet(psi: SymDiff, w, max_degree: int | None = None) -> complex:
    """phi(psi)(0, w) from the Taylor coefficients of psi at the origin.

    Sum over s of jet_coefficient(N, s) * sum_{K, |J|=s} (d^J psi_K(0) / J!) w^(J+K).
    Exact for polynomial coefficients.
    """
    _check_degree(psi)
    w = as_point(w)
    if w.size != psi.n:
        raise DomainError("w must have the dimension of psi")
    if max_degree is not None and max_degree < psi.degree:
        raise DomainError(f"max_degree={max_degree} is below the coefficient degree {psi.degree}")
    total = 0j
    for K, p in psi.terms.items():
        wk = np.prod(w ** np.array(K))
        for J, c in p.coeffs.items():
            total += float(jet_coefficient(psi.N, J.order)) * c * np.prod(w ** np.array(J)) * wk
    return complex(total)


def adachi_line_integral(coef: PolyFunc, N: int, z: complex, w: complex, nodes: int | None = None) -> complex:
    """One-variable line integral over the segment from z to w.

    Uses the integrable kernel ((w-t)(t-z)/(w-z))^(N-1); with t = z + s(w-z) this is
    (w-z)^N / B(N, N) times the integral over [0, 1] of s^(N-1)(1-s)^(N-1) coef(t) ds,
    evaluated by Gauss-Jacobi quadrature with both exponents N-1.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    if coef.n != 1:
        raise DomainError("the line integral is only defined for n = 1")
    z, w = complex(z), complex(w)
    if abs(z) >= 1 or abs(w) >= 1:
        raise DomainError("z and w must lie in the unit disc")
    if z == w:
        raise DomainError("z and w must differ")

    def rule(k):
        x, wts = roots_jacobi(k, N - 1, N - 1)
        s = (1.0 + x) / 2.0
        vals = coef((z + s * (w - z))[:, None])
        return np.sum(wts * vals) / 2.0 ** (2 * N - 1)

    k = nodes or max(coef.degree // 2 + 1, 4)
    first, second = rule(k), rule(2 * k)
    scale = max(1.0, abs(second))
    if abs(first - second) > 1e-12 * scale:
        raise ConvergenceError(f"Gauss-Jacobi rule not converged: {abs(first - second):.3e}", abs(first - second))
    return complex((w - z) ** N * second / beta_fn(N, N))


def adachi_crosscheck(coef: PolyFunc, N: int, w: complex, threshold: float = 1e-3) -> dict:
    """Compare the line integral at z = 0 with phi_jet of coef * dt^N.

    Also reports the residual with the segment reversed, which differs by (-1)^N.
    """
    line = adachi_line_integral(coef, N, 0.0, w)
    jet = phi_jet(SymDiff(1, N, {(N,): coef}), [w])
    residual = abs(line - jet)
    reversed_residual = abs((-1) ** N * line - jet)
    return {
        "line_integral": line,
        "jet": jet,
        "residual": residual,
        "reversed_residual": reversed_residual,
        "status": "consistent" if residual <= threshold else "unresolved",
    }
