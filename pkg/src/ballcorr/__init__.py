"""Integral transforms of symmetric differentials on the complex unit ball.

Exact constants live in ``exact``; geometry in ``ball``; the transform and its
oracles in ``integrate`` and ``correspondence``.
"""

from .ball import BallPoint, MoebiusMap, random_automorphism
from .correspondence import GradField, grad_phi, phi, phi_jet, theta
from .errors import ConvergenceError, DivergentWeightError, DomainError
from .exact import MultiIndex, PiScalar
from .integrate import MCResult, SeriesResult, mc_integrate, theta_series
from .symdiff import EmbeddedSymDiff, PolyFunc, SymDiff

__all__ = [
    "BallPoint",
    "MoebiusMap",
    "random_automorphism",
    "GradField",
    "grad_phi",
    "phi",
    "phi_jet",
    "theta",
    "ConvergenceError",
    "DivergentWeightError",
    "DomainError",
    "MultiIndex",
    "PiScalar",
    "MCResult",
    "SeriesResult",
    "mc_integrate",
    "theta_series",
    "EmbeddedSymDiff",
    "PolyFunc",
    "SymDiff",
]
