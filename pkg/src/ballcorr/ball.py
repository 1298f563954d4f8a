"""Geometry of the unit ball in C^n.

Index conventions: ``metric(z)[i, j]`` is g_{i jbar} and ``inverse_metric(z)[k, l]``
is g^{k lbar}, so the contraction sum_k g^{k lbar} g_{k jbar} = delta_{lj} reads
``inverse_metric(z).T @ metric(z) == I``.  The frame A = dT_z(z) reconstructs the
metric as ``A.T @ A.conj()`` (coefficient of dz_k (x) conj(dz_l) in sum_j e_j (x) conj(e_j)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .errors import DomainError

__all__ = [
    "BallPoint",
    "MoebiusMap",
    "as_point",
    "bergman_kernel",
    "metric",
    "inverse_metric",
    "frame_metric",
    "t_map",
    "t_jacobian",
    "moebius_apply",
    "moebius_jacobian",
    "unitary_frame",
    "volume_weight",
    "random_automorphism",
    "random_ball_point",
]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BallPoint:
    """A point of the open unit ball, at least ``boundary_margin`` from the sphere."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coords, dtype=complex))
        if c.ndim != 1 or c.size < 1:
            raise DomainError(f"a ball point needs a 1-d coordinate vector, got shape {c.shape}")
        norm = float(np.linalg.norm(c))
        if norm > 1.0 - DEFAULTS.boundary_margin:
            raise DomainError(f"|z| = {norm!r} is not inside the unit ball (margin {DEFAULTS.boundary_margin})")
        object.__setattr__(self, "coords", _freeze(c))

    @property
    def n(self) -> int:
        return self.coords.size

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.coords, self.coords).real)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __eq__(self, other):
        return isinstance(other, BallPoint) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    def __repr__(self):
        return f"BallPoint({self.coords.tolist()!r})"


def as_point(z) -> np.ndarray:
    """Validated coordinate array of an interior point (accepts BallPoint or array-like)."""
    if isinstance(z, BallPoint):
        return z.coords
    return BallPoint(z).coords


def _same_dim(*arrays):
    sizes = {a.shape[-1] for a in arrays}
    if len(sizes) != 1:
        raise DomainError(f"dimension mismatch: {sorted(sizes)}")


def bergman_kernel(z, w) -> complex:
    """Normalised Bergman kernel (1 - z.conj(w))^-(n+1)."""
    z, w = as_point(z), as_point(w)
    _same_dim(z, w)
    return complex((1.0 - np.dot(z, w.conj())) ** (-(z.size + 1)))


def metric(z) -> np.ndarray:
    """g_{i jbar} = ((1-|z|^2) delta_ij + conj(z_i) z_j) / (1-|z|^2)^2."""
    z = as_point(z)
    r = np.vdot(z, z).real
    return ((1.0 - r) * np.eye(z.size) + np.outer(z.conj(), z)) / (1.0 - r) ** 2


def inverse_metric(z) -> np.ndarray:
    """g^{k lbar} = (1-|z|^2)(delta_kl - z_k conj(z_l))."""
    z = as_point(z)
    r = np.vdot(z, z).real
    return (1.0 - r) * (np.eye(z.size) - np.outer(z, z.conj()))


def frame_metric(A: np.ndarray) -> np.ndarray:
    """Metric coefficients sum_j A_jk conj(A_jl) of the coframe e_j = sum_k A_jk dz_k."""
    return A.T @ A.conj()


def t_map(a: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Involution T_a, vectorised over leading axes of ``w``."""
    a = np.asarray(a, dtype=complex)
    w = np.asarray(w, dtype=complex)
    r = np.vdot(a, a).real
    s = np.sqrt(1.0 - r)
    ip = w @ a.conj()
    if r > 0:
        pw = (ip / r)[..., None] * a
    else:
        pw = np.zeros_like(w)
    qw = w - pw
    return (a - pw - s * qw) / (1.0 - ip)[..., None]


def t_jacobian(a: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Holomorphic Jacobian d(T_a)_j / dw_k at ``w``, vectorised over leading axes.

    With d = 1 - <w, a> and L the linear part of the numerator,
    dT = (L + T_a(w) conj(a)^T) / d.
    """
    a = np.asarray(a, dtype=complex)
    w = np.asarray(w, dtype=complex)
    n = a.size
    r = np.vdot(a, a).real
    s = np.sqrt(1.0 - r)
    proj = np.outer(a, a.conj()) / r if r > 0 else np.zeros((n, n), dtype=complex)
    lin = -(s * np.eye(n) + (1.0 - s) * proj)
    d = 1.0 - w @ a.conj()
    tw = t_map(a, w)
    return (lin + tw[..., :, None] * a.conj()) / d[..., None, None]


def _closest_unitary(M: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(M)
    return u @ vh


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """Automorphism w -> U T_a(w) of the ball, stored in the normal form (U, a).

    The identity map is (-I, 0) since T_0(w) = -w.
    """

    unitary: np.ndarray
    center: np.ndarray

    def __post_init__(self):
        U = np.asarray(self.unitary, dtype=complex)
        a = as_point(self.center)
        if U.shape != (a.size, a.size):
            raise DomainError(f"unitary shape {U.shape} does not match center dimension {a.size}")
        err = np.abs(U.conj().T @ U - np.eye(a.size)).max()
        if err > DEFAULTS.unitary_tol:
            raise DomainError(f"matrix is not unitary (max deviation {err:.3e})")
        object.__setattr__(self, "unitary", _freeze(U))
        object.__setattr__(self, "center", _freeze(a))

    @property
    def n(self) -> int:
        return self.center.size

    @classmethod
    def identity(cls, n: int) -> "MoebiusMap":
        return cls(-np.eye(n), np.zeros(n))

    @classmethod
    def involution(cls, a) -> "MoebiusMap":
        """T_a itself."""
        a = as_point(a)
        return cls(np.eye(a.size), a)

    @classmethod
    def linear(cls, U) -> "MoebiusMap":
        """The unitary map w -> U w."""
        U = np.asarray(U, dtype=complex)
        return cls(-U, np.zeros(U.shape[0]))

    def __call__(self, w) -> np.ndarray:
        return np.asarray(t_map(self.center, w)) @ self.unitary.T

    def jacobian(self, w) -> np.ndarray:
        return self.unitary @ t_jacobian(self.center, w)

    def inverse_apply(self, y) -> np.ndarray:
        return t_map(self.center, np.asarray(y, dtype=complex) @ self.unitary.conj())

    @classmethod
    def _from_jacobian(cls, jac, center) -> "MoebiusMap":
        # f = U T_c with c = f^{-1}(0); U = d(f o T_c)(0) = Jf(c) dT_c(0)
        center = np.asarray(center, dtype=complex)
        U = jac(center) @ t_jacobian(center, np.zeros_like(center))
        return cls(_closest_unitary(U), center)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self o other, renormalised to (U, a) form."""
        if other.n != self.n:
            raise DomainError("dimension mismatch in composition")
        center = other.inverse_apply(self.center)

        def jac(w):
            return self.jacobian(other(w)) @ other.jacobian(w)

        return MoebiusMap._from_jacobian(jac, center)

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self) -> "MoebiusMap":
        center = self(np.zeros(self.n))

        def jac(y):
            x = y @ self.unitary.conj()
            return t_jacobian(self.center, x) @ self.unitary.conj().T

        return MoebiusMap._from_jacobian(jac, center)

    def distance(self, other: "MoebiusMap") -> float:
        """Max-entry distance between normal forms."""
        return float(
            max(np.abs(self.unitary - other.unitary).max(), np.abs(self.center - other.center).max())
        )

    def __repr__(self):
        return f"MoebiusMap(unitary={self.unitary.tolist()!r}, center={self.center.tolist()!r})"


def moebius_apply(gamma: MoebiusMap, w) -> BallPoint:
    return BallPoint(gamma(as_point(w)))


def moebius_jacobian(gamma: MoebiusMap, w) -> np.ndarray:
    return gamma.jacobian(as_point(w))


def unitary_frame(z) -> np.ndarray:
    """A = dT_z(z); the rows give the g-orthonormal coframe e_j = sum_k A_jk dz_k."""
    z = as_point(z)
    return t_jacobian(z, z)


def volume_weight(tau) -> float:
    """Density (1-|tau|^2)^-(n+1) of dV_g against Lebesgue measure."""
    tau = as_point(tau)
    return float((1.0 - np.vdot(tau, tau).real) ** (-(tau.size + 1)))


def random_ball_point(rng: np.random.Generator, n: int, radius: float = 1.0) -> np.ndarray:
    """Uniform point in the ball of the given radius in C^n."""
    g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    g /= np.linalg.norm(g)
    return radius * rng.random() ** (1.0 / (2 * n)) * g


def random_automorphism(seed: int, n: int, radius: float = 0.8) -> MoebiusMap:
    """Deterministic (U, a) with Haar unitary U and a uniform in the radius-0.8 ball."""
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    U = Q * (d / np.abs(d))
    return MoebiusMap(U, random_ball_point(rng, n, radius))
