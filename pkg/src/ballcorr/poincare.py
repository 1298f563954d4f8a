"""Per-automorphism form of the Poincare-series identity and partial sums over word sets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .ball import MoebiusMap, as_point
from .config import DEFAULTS
from .correspondence import GradField, grad_phi
from .errors import DomainError
from .exact import poincare_constant, slice_moment_constant
from .integrate import mc_integrate
from .symdiff import SymDiff, pullback_contract

__all__ = [
    "GroupWordSet",
    "PerGammaResult",
    "PartialSums",
    "per_gamma_identity",
    "partial_poincare_sum",
    "constant_ratio_table",
]


@dataclass(frozen=True, eq=False)
class GroupWordSet:
    """All words of length <= max_word_length in the generators and their inverses.

    ``tiers[k]`` holds the elements first reached at word length k; tier 0 is the
    identity.  Elements are deduplicated by normal form.
    """

    generators: Sequence[MoebiusMap]
    max_word_length: int
    n: int | None = None
    dedup_tol: float = DEFAULTS.normal_form_tol
    tiers: list = field(init=False, repr=False)

    def __post_init__(self):
        gens = list(self.generators)
        if self.max_word_length < 0:
            raise DomainError("max_word_length must be >= 0")
        if not gens and self.max_word_length > 0:
            raise DomainError("need at least one generator for words of positive length")
        dims = {g.n for g in gens} | ({self.n} if self.n is not None else set())
        if len(dims) != 1:
            raise DomainError("generators must act on one ball; pass n when there are none")
        n = dims.pop()
        letters = []
        for g in gens:
            letters += [g, g.inverse()]
        seen = [MoebiusMap.identity(n)]
        tiers = [[seen[0]]]
        for _ in range(self.max_word_length):
            nxt = []
            for word in tiers[-1]:
                for letter in letters:
                    cand = letter @ word
                    if all(cand.distance(s) > self.dedup_tol for s in seen):
                        seen.append(cand)
                        nxt.append(cand)
            if not nxt:
                break
            tiers.append(nxt)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "tiers", tiers)

    @property
    def elements(self) -> list[MoebiusMap]:
        return [g for tier in self.tiers for g in tier]

    def __len__(self):
        return sum(len(t) for t in self.tiers)


class PerGammaResult(NamedTuple):
    lhs: complex
    rhs: complex
    residual: float
    stderr: float


def per_gamma_identity(
    gamma: MoebiusMap,
    j: int,
    n: int,
    N: int,
    z,
    w,
    tol: float = DEFAULTS.poincare_floor,
    samples: int = DEFAULTS.mc_samples,
    seed: int = 0,
) -> PerGammaResult:
    """Compare the transform of the pulled-back form gamma^*(dt_j^N) with C (gamma_j(w) - gamma_j(z))^N.

    The left side is a Monte Carlo estimate; C is slice_moment_constant(n, N).
    ``tol`` is carried for the caller's pass criterion max(3 stderr, tol).
    """
    if n < 2:
        raise DomainError("the per-automorphism identity needs n >= 2")
    if N < n + 1:
        raise DomainError(f"need N >= n+1, got N={N}")
    if not 1 <= j <= n:
        raise DomainError(f"j={j} outside 1..{n}")
    if gamma.n != n:
        raise DomainError("automorphism dimension does not match n")
    z, w = as_point(z), as_point(w)
    psi = SymDiff.dtau_power(n, j, N)
    fieldzw = GradField(z, w)

    def f(tau):
        r = np.einsum("...j,...j->...", tau, tau.conj()).real
        v = grad_phi(fieldzw, tau) / (1.0 - r)[..., None]
        return pullback_contract(gamma, v, psi, tau)

    mc = mc_integrate(f, n, N - n - 1, samples, seed)
    C = float(slice_moment_constant(n, N))
    rhs = complex(C * (gamma(w)[j - 1] - gamma(z)[j - 1]) ** N)
    return PerGammaResult(mc.estimate, rhs, abs(mc.estimate - rhs), mc.stderr)


def _fsum_complex(values) -> complex:
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


class PartialSums(NamedTuple):
    sums: list
    pullback_sums: list | None


def partial_poincare_sum(
    words: GroupWordSet, j: int, N: int, z, w, v=None, tau=None
) -> PartialSums:
    """Cumulative sums of (gamma_j(z) - gamma_j(w))^N over word-length tiers.

    Each tier is summed with an exactly rounded sum, so the result does not depend
    on the order of words within a tier.  If ``v`` and ``tau`` are given, also
    returns partial sums of <v^N, gamma^*(dt_j^N)>(tau).
    """
    z, w = as_point(z), as_point(w)
    n = z.size
    if N < n + 1:
        raise DomainError(f"need N >= n+1, got N={N}")
    if not 1 <= j <= n:
        raise DomainError(f"j={j} outside 1..{n}")
    sums, running = [], 0j
    pull, prun = ([], 0j) if v is not None else (None, 0j)
    psi = SymDiff.dtau_power(n, j, N)
    if v is not None:
        if tau is None:
            raise DomainError("tau is required together with v")
        v = np.asarray(v, dtype=complex)
        tau = as_point(tau)
    for tier in words.tiers:
        running += _fsum_complex(complex((g(z)[j - 1] - g(w)[j - 1]) ** N) for g in tier)
        sums.append(running)
        if pull is not None:
            prun += _fsum_complex(complex(pullback_contract(g, v, psi, tau)) for g in tier)
            pull.append(prun)
    return PartialSums(sums, pull)


def constant_ratio_table(pairs) -> list[dict]:
    """Self-consistent against printed Poincare constants for each (n, N)."""
    rows = []
    for n, N in pairs:
        exact, printed = poincare_constant(n, N)
        if exact.pi_power != 0:
            raise DomainError("self-consistent constant should be rational")
        ratio = exact.ratio / printed
        rows.append(
            {"n": n, "N": N, "computed": str(exact.ratio), "printed": str(printed), "ratio": str(Fraction(ratio))}
        )
    return rows
