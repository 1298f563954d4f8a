"""Integral transform for the coordinate slice B^n x {0} inside the larger ball B^n_ambient.

A section mixes ell tangential and m - ell normal directions.  The transform
integrates its contraction with the m-th power of the ambient gradient field over
the slice, against the slice's own invariant volume.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ball import as_point
from .config import DEFAULTS
from .correspondence import GradField, grad_phi
from .errors import DivergentWeightError, DomainError
from .exact import c_const, embedding_jet_coefficient, multi_indices
from .integrate import MCResult, contract_numerator, gradient_factors, mc_integrate, series_integrate
from .symdiff import EmbeddedSymDiff, PolyFunc, monomial_power

__all__ = [
    "SliceConfig",
    "theta_embedded",
    "theta_embedded_mc",
    "embedding_constant",
    "phi_embedded",
    "embedded_jet",
    "fitted_ratio",
    "random_embedded",
]


@dataclass(frozen=True)
class SliceConfig:
    n: int
    n_ambient: int

    def __post_init__(self):
        if not 1 <= self.n < self.n_ambient:
            raise DomainError(
                f"need 1 <= n < n_ambient, got n={self.n}, n_ambient={self.n_ambient}; "
                "use the correspondence module when they are equal"
            )

    def embed(self, zeta) -> np.ndarray:
        zeta = np.asarray(zeta, dtype=complex)
        if zeta.shape[-1] != self.n:
            raise DomainError("slice point has the wrong dimension")
        pad = np.zeros(zeta.shape[:-1] + (self.n_ambient - self.n,), dtype=complex)
        return np.concatenate([zeta, pad], axis=-1)


def _ambient_terms(psi: EmbeddedSymDiff):
    return [(tuple(L) + tuple(J), p) for (L, J), p in psi.terms.items()]


def _prepare(psi: EmbeddedSymDiff, w, zeta):
    if psi.m < psi.n + 1:
        raise DivergentWeightError(f"m={psi.m} must be >= n+1={psi.n + 1} for the slice weight to be integrable")
    w = as_point(w)
    if w.size != psi.n_ambient:
        raise DomainError("w must lie in the ambient ball")
    if np.linalg.norm(w) > DEFAULTS.max_radius + 1e-15:
        raise DomainError(f"|w| exceeds the admissible radius {DEFAULTS.max_radius}")
    z = np.zeros(psi.n_ambient, dtype=complex)
    if zeta is not None:
        zeta = as_point(zeta)
        if zeta.size != psi.n:
            raise DomainError("base point must lie in the slice")
        z[: psi.n] = zeta
    return z, w


def theta_embedded(psi: EmbeddedSymDiff, w, tol: float = DEFAULTS.series_tol, zeta=None) -> complex:
    """Series evaluation; the base point is the slice origin unless ``zeta`` is given."""
    z, w = _prepare(psi, w, zeta)
    n = psi.n
    numer = contract_numerator(_ambient_terms(psi), gradient_factors(z, w, n), n)
    res = series_integrate(
        numer, n, psi.m - n - 1, z=z[:n], a=psi.m, w=w[:n], b=psi.m, tol=tol, start_degree=psi.m + 10
    )
    return res.value


def theta_embedded_mc(
    psi: EmbeddedSymDiff, w, zeta=None, samples: int = DEFAULTS.mc_samples, seed: int = 0
) -> MCResult:
    """Monte Carlo oracle built directly from the ambient gradient field."""
    z, w = _prepare(psi, w, zeta)
    n, na = psi.n, psi.n_ambient
    field = GradField(z, w)
    terms = _ambient_terms(psi)

    def f(tau):
        amb = np.concatenate([tau, np.zeros(tau.shape[:-1] + (na - n,), dtype=complex)], axis=-1)
        r = np.einsum("...j,...j->...", tau, tau.conj()).real
        v = grad_phi(field, amb) / (1.0 - r)[..., None]
        out = np.zeros(tau.shape[:-1], dtype=complex)
        for I, p in terms:
            out = out + p(tau) * monomial_power(v, I)
        return out

    return mc_integrate(f, n, psi.m - n - 1, samples, seed)


def embedding_constant(n: int, m: int, ell: int) -> float:
    """c_const(n, m) (m + ell - 1) / (2m - 1)."""
    return float(c_const(n, m) * Fraction(m + ell - 1, 2 * m - 1))


def phi_embedded(psi: EmbeddedSymDiff, w, tol: float = DEFAULTS.series_tol) -> complex:
    return embedding_constant(psi.n, psi.m, psi.ell) * theta_embedded(psi, w, tol)


def embedded_jet(psi: EmbeddedSymDiff, w) -> complex:
    """Finite Taylor series at the slice origin.

    Sum over (L, J) and jets K of embedding_jet_coefficient(m, ell, |K|)
    * (d^K psi_LJ(0) / K!) * w_tan^(L+K) * w_nor^J.
    """
    w = as_point(w)
    if w.size != psi.n_ambient:
        raise DomainError("w must lie in the ambient ball")
    n = psi.n
    wt, wn = w[:n], w[n:]
    total = 0j
    for (L, J), p in psi.terms.items():
        base = monomial_power(wt, L) * monomial_power(wn, J)
        for K, c in p.coeffs.items():
            coef = float(embedding_jet_coefficient(psi.m, psi.ell, K.order))
            total += coef * c * base * monomial_power(wt, K)
    return complex(total)


def fitted_ratio(psi: EmbeddedSymDiff, w, tol: float = DEFAULTS.series_tol) -> complex:
    """embedded_jet / phi_embedded; equals 1 when the stated constant matches the series."""
    num = embedded_jet(psi, w)
    den = phi_embedded(psi, w, tol)
    if den == 0:
        raise DomainError("phi_embedded vanishes; ratio undefined")
    return num / den


def random_embedded(
    rng: np.random.Generator, n: int, n_ambient: int, m: int, ell: int, max_degree: int = 2
) -> EmbeddedSymDiff:
    """Random section with every (L, J) present and complex coefficients of degree <= max_degree."""
    terms = {}
    for L in multi_indices(n, ell):
        for J in multi_indices(n_ambient - n, m - ell):
            coeffs = {
                K: complex(rng.standard_normal(), rng.standard_normal())
                for d in range(max_degree + 1)
                for K in multi_indices(n, d)
            }
            terms[(L, J)] = PolyFunc(n, coeffs)
    return EmbeddedSymDiff(n, n_ambient, m, ell, terms)
