"""Exact arithmetic: multi-indices, pi-scaled rationals and the closed-form
constants of the ball correspondence.

Nothing in this module touches floating point except ``PiScalar.__float__``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import DomainError

__all__ = [
    "MultiIndex",
    "PiScalar",
    "multi_indices",
    "c_const",
    "moment",
    "binom_beta_identity",
    "multinomial_row_sum",
    "slice_moment_constant",
    "printed_slice_moment",
    "jet_coefficient",
    "embedding_jet_coefficient",
    "poincare_constant",
    "telescoping_identity",
]


class MultiIndex(tuple):
    """Tuple of non-negative integers with ``order`` (|I|) and ``factorial`` (I!)."""

    def __new__(cls, entries=()):
        entries = tuple(entries)
        for e in entries:
            if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                raise DomainError(f"multi-index entries must be non-negative ints, got {entries!r}")
        return super().__new__(cls, entries)

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, j: int, k: int = 1) -> "MultiIndex":
        """k times the j-th unit vector (0-based j)."""
        e = [0] * n
        e[j] = k
        return cls(e)

    @property
    def order(self) -> int:
        return sum(self)

    @property
    def factorial(self) -> int:
        out = 1
        for e in self:
            out *= factorial(e)
        return out

    def __add__(self, other):
        if len(self) != len(other):
            raise DomainError("multi-index length mismatch")
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        if len(self) != len(other):
            raise DomainError("multi-index length mismatch")
        return MultiIndex(a - b for a, b in zip(self, other))

    def __le__(self, other):
        return all(a <= b for a, b in zip(self, other))

    def __repr__(self):
        return f"MultiIndex({tuple(self)!r})"


def multi_indices(n: int, order: int):
    """All multi-indices of length ``n`` with |I| = ``order``, in lexicographic order."""
    if n == 0:
        if order == 0:
            yield MultiIndex(())
        return
    for bars in itertools.combinations(range(order + n - 1), n - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(order + n - 1 - prev - 1)
        yield MultiIndex(parts)


@dataclass(frozen=True)
class PiScalar:
    """Exact number ``ratio * pi**pi_power``."""

    ratio: Fraction
    pi_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ratio", Fraction(self.ratio))

    def __mul__(self, other):
        if isinstance(other, PiScalar):
            return PiScalar(self.ratio * other.ratio, self.pi_power + other.pi_power)
        if isinstance(other, (int, Fraction)):
            return PiScalar(self.ratio * other, self.pi_power)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PiScalar):
            return PiScalar(self.ratio / other.ratio, self.pi_power - other.pi_power)
        if isinstance(other, (int, Fraction)):
            return PiScalar(self.ratio / other, self.pi_power)
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, PiScalar):
            return NotImplemented
        if other.pi_power != self.pi_power:
            raise DomainError(
                f"cannot add pi^{self.pi_power} and pi^{other.pi_power} terms exactly"
            )
        return PiScalar(self.ratio + other.ratio, self.pi_power)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return PiScalar(-self.ratio, self.pi_power)

    def __float__(self):
        return float(self.ratio) * math.pi**self.pi_power

    def __complex__(self):
        return complex(float(self))

    def is_zero(self) -> bool:
        return self.ratio == 0

    def __str__(self):
        if self.pi_power == 0:
            return str(self.ratio)
        return f"{self.ratio}*pi^{self.pi_power}"


def _check_n_N(n: int, N: int):
    if n < 1:
        raise DomainError(f"dimension n must be >= 1, got {n}")
    if N < n + 1:
        raise DomainError(f"degree N={N} must satisfy N >= n+1 = {n + 1}")


def c_const(n: int, N: int) -> PiScalar:
    """Normalising constant (-1)^N (2N-1)(N-2)! / (pi^n (N-n-1)!)."""
    _check_n_N(n, N)
    num = (-1) ** N * (2 * N - 1) * factorial(N - 2)
    return PiScalar(Fraction(num, factorial(N - n - 1)), -n)


def moment(n: int, m: int, P, Q) -> PiScalar:
    """Exact value of the integral of (1-|t|^2)^m t^P conj(t)^Q over the unit ball of C^n.

    Zero unless P == Q; otherwise pi^n m! P! / (m + |P| + n)!.
    """
    if m < 0:
        raise DomainError(f"weight exponent m must be >= 0, got {m}")
    P, Q = MultiIndex(P), MultiIndex(Q)
    if len(P) != n or len(Q) != n:
        raise DomainError("moment index length must equal n")
    if P != Q:
        return PiScalar(Fraction(0), n)
    return PiScalar(Fraction(factorial(m) * P.factorial, factorial(m + P.order + n)), n)


def binom_beta_identity(N: int, k: int) -> tuple[Fraction, Fraction]:
    """Both sides of the alternating binomial sum / Beta-integral identity.

    lhs is summed term by term; rhs is k!(2N-2)!/((N-2)!(2N+k-1)!).
    """
    if N < 2 or k < 0:
        raise DomainError(f"need N >= 2 and k >= 0, got N={N}, k={k}")
    lhs = Fraction(0)
    for r in range(N + 1):
        lhs += Fraction(
            (-1) ** (N - r) * comb(N, r) * factorial(N - r + k),
            factorial(2 * N - r + k - 1),
        )
    rhs = Fraction(
        factorial(k) * factorial(2 * N - 2),
        factorial(N - 2) * factorial(2 * N + k - 1),
    )
    return lhs, rhs


def _splittings(I: MultiIndex, r: int):
    """All A <= I with |A| = r (B = I - A implied)."""
    ranges = [range(i + 1) for i in I]
    for A in itertools.product(*ranges):
        if sum(A) == r:
            yield MultiIndex(A)


def multinomial_row_sum(I, r: int) -> int:
    """Sum over A + B = I with |A| = r of I!/(A! B!), by enumeration."""
    I = MultiIndex(I)
    if not 0 <= r <= I.order:
        raise DomainError(f"r={r} outside [0, |I|={I.order}]")
    total = 0
    for A in _splittings(I, r):
        B = I - A
        total += I.factorial // (A.factorial * B.factorial)
    return total


def slice_moment_constant(n: int, N: int) -> PiScalar:
    """Integral of (1-|t|^2)^(N-n-1) (1-|t_j|^2)^N over the ball, by binomial expansion."""
    _check_n_N(n, N)
    total = PiScalar(Fraction(0), n)
    m = N - n - 1
    for k in range(N + 1):
        P = MultiIndex.unit(n, 0, k)
        total = total + (-1) ** k * comb(N, k) * moment(n, m, P, P)
    return total


def printed_slice_moment(n: int, N: int) -> PiScalar:
    """Reference closed form pi^n (N-n)! / (2 (n-1) N!), kept for comparison with slice_moment_constant."""
    _check_n_N(n, N)
    if n == 1:
        raise DomainError("printed slice constant divides by n-1; undefined for n=1")
    return PiScalar(Fraction(factorial(N - n), 2 * (n - 1) * factorial(N)), n)


def jet_coefficient(N: int, s: int) -> Fraction:
    """(-1)^N (2N-1)!/(N-1)! * (N+s-1)!/(2N+s-1)!."""
    if N < 1 or s < 0:
        raise DomainError(f"need N >= 1 and s >= 0, got N={N}, s={s}")
    return Fraction(
        (-1) ** N * factorial(2 * N - 1) * factorial(N + s - 1),
        factorial(N - 1) * factorial(2 * N + s - 1),
    )


def embedding_jet_coefficient(m: int, ell: int, s: int) -> Fraction:
    """(-1)^m (m+l-1)!/(m-1)! * (m+s-1)!/(m+l+s-1)! for the slice embedding series."""
    if m < 1 or not 0 <= ell <= m or s < 0:
        raise DomainError(f"need m >= 1, 0 <= ell <= m, s >= 0; got m={m}, ell={ell}, s={s}")
    return Fraction(
        (-1) ** m * factorial(m + ell - 1) * factorial(m + s - 1),
        factorial(m - 1) * factorial(m + ell + s - 1),
    )


def poincare_constant(n: int, N: int) -> tuple[PiScalar, Fraction]:
    """(self-consistent constant, printed constant) for the Poincare-series identity.

    The self-consistent value is (-1)^N c_{n,N} times the slice moment; the
    printed one is (2N-1)(N-n) / (2N (n-1)(N-1)).
    """
    if n < 2:
        raise DomainError("printed Poincare constant divides by n-1; need n >= 2")
    _check_n_N(n, N)
    exact = (-1) ** N * (c_const(n, N) * slice_moment_constant(n, N))
    printed = Fraction((2 * N - 1) * (N - n), 2 * N * (n - 1) * (N - 1))
    return exact, printed


def telescoping_identity(n: int, N: int) -> tuple[PiScalar, PiScalar]:
    """c_{n,N} * pi^n (N-n-1)!(2N-2)!/((N-1)!(N-2)!) against (-1)^N (2N-1)!/(N-1)!."""
    _check_n_N(n, N)
    prefactor = PiScalar(
        Fraction(
            factorial(N - n - 1) * factorial(2 * N - 2),
            factorial(N - 1) * factorial(N - 2),
        ),
        n,
    )
    lhs = c_const(n, N) * prefactor
    rhs = PiScalar(Fraction((-1) ** N * factorial(2 * N - 1), factorial(N - 1)), 0)
    return lhs, rhs
