"""Symmetric differentials with polynomial coefficients.

Contraction uses the monomial normalisation <v^N, dtau^I> = v^I, with no N! factor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import factorial
from typing import Mapping

import numpy as np

from .ball import MoebiusMap
from .errors import DomainError
from .exact import MultiIndex, multi_indices

__all__ = [
    "PolyFunc",
    "SymDiff",
    "EmbeddedSymDiff",
    "contract_power",
    "pullback_contract",
    "poly_derivative",
    "jet_at_zero",
    "monomial_power",
    "random_symdiff",
]


def monomial_power(x: np.ndarray, exps) -> np.ndarray:
    """prod_j x_j^{e_j} over the last axis of ``x``."""
    x = np.asarray(x, dtype=complex)
    out = np.ones(x.shape[:-1], dtype=complex)
    for j, e in enumerate(exps):
        if e:
            out = out * x[..., j] ** e
    return out


@dataclass(frozen=True)
class PolyFunc:
    """Holomorphic polynomial sum_K c_K tau^K in ``n`` variables."""

    n: int
    coeffs: Mapping[MultiIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, v in dict(self.coeffs).items():
            k = MultiIndex(k)
            if len(k) != self.n:
                raise DomainError(f"exponent {tuple(k)} has length {len(k)}, expected {self.n}")
            v = complex(v)
            if v != 0:
                clean[k] = clean.get(k, 0) + v
        object.__setattr__(self, "coeffs", {k: v for k, v in clean.items() if v != 0})

    @classmethod
    def constant(cls, n: int, c: complex = 1.0) -> "PolyFunc":
        return cls(n, {MultiIndex.zero(n): c})

    @classmethod
    def monomial(cls, exps, c: complex = 1.0) -> "PolyFunc":
        exps = MultiIndex(exps)
        return cls(len(exps), {exps: c})

    @property
    def degree(self) -> int:
        return max((k.order for k in self.coeffs), default=0)

    def coefficient(self, K) -> complex:
        return self.coeffs.get(MultiIndex(K), 0j)

    def __call__(self, tau) -> np.ndarray | complex:
        tau = np.asarray(tau, dtype=complex)
        out = np.zeros(tau.shape[:-1], dtype=complex)
        for k, c in self.coeffs.items():
            out = out + c * monomial_power(tau, k)
        return out if out.ndim else complex(out)

    def __add__(self, other: "PolyFunc") -> "PolyFunc":
        if self.n != other.n:
            raise DomainError("dimension mismatch")
        merged = dict(self.coeffs)
        for k, v in other.coeffs.items():
            merged[k] = merged.get(k, 0) + v
        return PolyFunc(self.n, merged)

    def __mul__(self, scalar) -> "PolyFunc":
        return PolyFunc(self.n, {k: scalar * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def to_json(self):
        return [
            {"exp": list(k), "re": v.real, "im": v.imag}
            for k, v in sorted(self.coeffs.items())
        ]

    @classmethod
    def from_json(cls, n: int, items) -> "PolyFunc":
        return cls(n, {MultiIndex(it["exp"]): complex(it.get("re", 0.0), it.get("im", 0.0)) for it in items})


def poly_derivative(p: PolyFunc, K) -> PolyFunc:
    """Formal derivative d^K p."""
    K = MultiIndex(K)
    out = {}
    for e, c in p.coeffs.items():
        if not K <= e:
            continue
        scale = 1
        for ej, kj in zip(e, K):
            scale *= factorial(ej) // factorial(ej - kj)
        out[e - K] = c * scale
    return PolyFunc(p.n, out)


def jet_at_zero(p: PolyFunc, K) -> complex:
    """d^K p (0) = K! * coeff_K."""
    K = MultiIndex(K)
    return K.factorial * p.coefficient(K)


@dataclass(frozen=True)
class SymDiff:
    """Degree-N symmetric differential sum_{|I|=N} psi_I(tau) dtau^I on a domain in C^n."""

    n: int
    N: int
    terms: Mapping[MultiIndex, PolyFunc] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for I, p in dict(self.terms).items():
            I = MultiIndex(I)
            if len(I) != self.n or I.order != self.N:
                raise DomainError(f"index {tuple(I)} is not a length-{self.n} index of order {self.N}")
            if not isinstance(p, PolyFunc):
                p = PolyFunc.constant(self.n, p)
            if p.n != self.n:
                raise DomainError("coefficient polynomial has wrong dimension")
            if I in clean:
                p = clean[I] + p
            if p.coeffs:
                clean[I] = p
            else:
                clean.pop(I, None)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, n: int, I, coeff: PolyFunc | complex = 1.0) -> "SymDiff":
        I = MultiIndex(I)
        return cls(n, I.order, {I: coeff})

    @classmethod
    def dtau_power(cls, n: int, j: int, N: int) -> "SymDiff":
        """dtau_j^N with unit coefficient; ``j`` is 1-based."""
        if not 1 <= j <= n:
            raise DomainError(f"coordinate index j={j} outside 1..{n}")
        return cls.monomial(n, MultiIndex.unit(n, j - 1, N))

    @property
    def degree(self) -> int:
        """Maximal polynomial degree of the coefficients."""
        return max((p.degree for p in self.terms.values()), default=0)

    def __add__(self, other: "SymDiff") -> "SymDiff":
        if (self.n, self.N) != (other.n, other.N):
            raise DomainError("can only add symmetric differentials of equal (n, N)")
        merged = dict(self.terms)
        for I, p in other.terms.items():
            merged[I] = merged[I] + p if I in merged else p
        return SymDiff(self.n, self.N, merged)

    def __mul__(self, scalar) -> "SymDiff":
        return SymDiff(self.n, self.N, {I: scalar * p for I, p in self.terms.items()})

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "terms": [{"index": list(I), "poly": p.to_json()} for I, p in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, data) -> "SymDiff":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n, N = int(data["n"]), int(data["N"])
            terms = {MultiIndex(t["index"]): PolyFunc.from_json(n, t["poly"]) for t in data["terms"]}
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed SymDiff JSON: {exc}") from exc
        return cls(n, N, terms)


@dataclass(frozen=True)
class EmbeddedSymDiff:
    """Section of S^ell T*_M (x) S^(m-ell) N* for the slice C^n x {0} in C^n_ambient.

    ``terms`` maps (L, J) with |L| = ell (tangential, length n) and |J| = m - ell
    (normal, length n_ambient - n) to a polynomial in the n slice variables.
    """

    n: int
    n_ambient: int
    m: int
    ell: int
    terms: Mapping[tuple, PolyFunc] = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.n <= self.n_ambient:
            raise DomainError(f"need 1 <= n <= n_ambient, got n={self.n}, n_ambient={self.n_ambient}")
        if not 0 <= self.ell <= self.m:
            raise DomainError(f"need 0 <= ell <= m, got ell={self.ell}, m={self.m}")
        if self.n == self.n_ambient and self.ell != self.m:
            raise DomainError("with no normal directions ell must equal m")
        clean = {}
        for (L, J), p in dict(self.terms).items():
            L, J = MultiIndex(L), MultiIndex(J)
            if len(L) != self.n or L.order != self.ell:
                raise DomainError(f"tangential index {tuple(L)} must have length {self.n} and order {self.ell}")
            if len(J) != self.n_ambient - self.n or J.order != self.m - self.ell:
                raise DomainError(
                    f"normal index {tuple(J)} must have length {self.n_ambient - self.n} and order {self.m - self.ell}"
                )
            if not isinstance(p, PolyFunc):
                p = PolyFunc.constant(self.n, p)
            if (L, J) in clean:
                p = clean[(L, J)] + p
            if p.coeffs:
                clean[(L, J)] = p
        object.__setattr__(self, "terms", clean)

    @property
    def degree(self) -> int:
        return max((p.degree for p in self.terms.values()), default=0)

    @classmethod
    def from_symdiff(cls, psi: SymDiff) -> "EmbeddedSymDiff":
        """The trivial slice n = n_ambient."""
        empty = MultiIndex(())
        return cls(psi.n, psi.n, psi.N, psi.N, {(I, empty): p for I, p in psi.terms.items()})

    def __add__(self, other):
        if (self.n, self.n_ambient, self.m, self.ell) != (other.n, other.n_ambient, other.m, other.ell):
            raise DomainError("incompatible embedded symmetric differentials")
        merged = dict(self.terms)
        for k, p in other.terms.items():
            merged[k] = merged[k] + p if k in merged else p
        return EmbeddedSymDiff(self.n, self.n_ambient, self.m, self.ell, merged)

    def __mul__(self, scalar):
        return EmbeddedSymDiff(
            self.n, self.n_ambient, self.m, self.ell, {k: scalar * p for k, p in self.terms.items()}
        )

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.m,
            "n_ambient": self.n_ambient,
            "ell": self.ell,
            "terms": [
                {"index": list(L), "normal_index": list(J), "poly": p.to_json()}
                for (L, J), p in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data) -> "EmbeddedSymDiff":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n = int(data["n"])
            terms = {
                (MultiIndex(t["index"]), MultiIndex(t["normal_index"])): PolyFunc.from_json(n, t["poly"])
                for t in data["terms"]
            }
            return cls(n, int(data["n_ambient"]), int(data["N"]), int(data["ell"]), terms)
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed EmbeddedSymDiff JSON: {exc}") from exc


def contract_power(v, psi: SymDiff, tau) -> np.ndarray | complex:
    """sum_I psi_I(tau) v^I, vectorised over matching leading axes of ``v`` and ``tau``."""
    v = np.asarray(v, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    if v.shape[-1] != psi.n or tau.shape[-1] != psi.n:
        raise DomainError(f"expected vectors of length {psi.n}")
    out = np.zeros(np.broadcast_shapes(v.shape[:-1], tau.shape[:-1]), dtype=complex)
    for I, p in psi.terms.items():
        out = out + p(tau) * monomial_power(v, I)
    return out if out.ndim else complex(out)


def pullback_contract(gamma: MoebiusMap, v, psi: SymDiff, tau) -> np.ndarray | complex:
    """<v^N, gamma^* psi>(tau), evaluated as <(dgamma v)^N, psi>(gamma(tau))."""
    v = np.asarray(v, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    dv = np.einsum("...jk,...k->...j", gamma.jacobian(tau), v)
    return contract_power(dv, psi, gamma(tau))


def random_symdiff(rng: np.random.Generator, n: int, N: int, max_degree: int = 2, density: float = 1.0) -> SymDiff:
    """Symmetric differential with random complex polynomial coefficients of degree <= max_degree."""
    terms = {}
    for I in multi_indices(n, N):
        if rng.random() > density:
            continue
        coeffs = {}
        for d in range(max_degree + 1):
            for K in multi_indices(n, d):
                coeffs[K] = complex(rng.standard_normal(), rng.standard_normal())
        terms[I] = PolyFunc(n, coeffs)
    return SymDiff(n, N, terms)
