"""Default tolerances and parallelism settings, echoed into every CLI report."""

import os
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Defaults:
    boundary_margin: float = 1e-9
    unitary_tol: float = 1e-12
    normal_form_tol: float = 1e-10
    series_tol: float = 1e-8
    series_degree_cap: int = 200
    max_radius: float = 0.9
    mc_samples: int = 100_000
    mc_block: int = 16_384
    jet_tol: float = 1e-6
    gradient_tol: float = 1e-8
    equivariance_tol: float = 1e-9
    poincare_floor: float = 1e-4
    kernel_tol: float = 1e-6
    d_alpha_term_cap: int = 20_000_000

    def as_dict(self):
        return asdict(self)


DEFAULTS = Defaults()


def thread_count() -> int:
    """Worker cap from BALLCORR_THREADS (default 1; results never depend on it)."""
    raw = os.environ.get("BALLCORR_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
