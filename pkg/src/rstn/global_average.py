"""Coarse average over all vertex states drawn as a single block.

When every vertex state is averaged jointly rather than per vertex,
the purity of a boundary region A stops depending on the interior
wiring of the graph altogether: only the boundary link counts, the
spin cutoffs and the purity of an optional core system survive.  The
functions here therefore consume counts, not a scenario -- the bulk
independence is enforced by the signature.

All dimension counting uses h, the number of (j, m) boundary states a
single link can carry between the cutoff spins, which grows like the
square of the upper cutoff dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from rstn.spins import dim_rep


@dataclass(frozen=True)
class GlobalAvgInput:
    n_outer: int  # total outer boundary links
    n_a: int  # links in the region A
    core_purity: float = 1.0  # e^{-S2} of the core state
    twice_lower: int = 0  # spin cutoffs (twice the spin)
    twice_upper: int = 1

    def __post_init__(self):
        if self.n_outer < 1:
            raise ValueError("need at least one outer boundary link")
        if not 0 <= self.n_a <= self.n_outer:
            raise ValueError(
                f"region size {self.n_a} not in 0..{self.n_outer}"
            )
        if not 0.0 < self.core_purity <= 1.0:
            raise ValueError("core purity must lie in (0, 1]")
        if self.h < 1:
            raise ValueError(
                f"cutoffs ({self.twice_lower}, {self.twice_upper}) leave "
                f"no boundary states (h = {self.h})"
            )

    @property
    def h(self) -> int:
        """Boundary states per link: [d_J(d_J+1) - d_j(d_j+1)] / 2."""
        d_hi = dim_rep(self.twice_upper)
        d_lo = dim_rep(self.twice_lower)
        return (d_hi * (d_hi + 1) - d_lo * (d_lo + 1)) // 2


def global_purity(inp: GlobalAvgInput) -> float:
    """Averaged purity of region A under the joint vertex average.

        (h^|Abar| + q h^|A|) / (h^n_outer + q),   q = core purity,

    evaluated in the log domain.
    """
    log_h = math.log(inp.h)
    log_q = math.log(inp.core_purity)
    n_bar = inp.n_outer - inp.n_a
    log_num = np.logaddexp(n_bar * log_h, log_q + inp.n_a * log_h)
    log_den = np.logaddexp(inp.n_outer * log_h, log_q)
    return float(math.exp(log_num - log_den))


@dataclass(frozen=True)
class GlobalEntropy:
    exact: float  # -log of the exact purity quotient
    approx: float  # min{S2(core) + |Abar| log h, |A| log h}
    gap: float


def global_entropy(inp: GlobalAvgInput) -> GlobalEntropy:
    """Order-2 entropy of region A, exact and in the min approximation.

    The two agree up to less than log 2 as soon as h >= 4: numerator
    and denominator of the purity quotient are each within a factor
    two of their dominant term.
    """
    log_h = math.log(inp.h)
    s2_core = -math.log(inp.core_purity)
    n_bar = inp.n_outer - inp.n_a
    exact = -math.log(global_purity(inp))
    approx = min(s2_core + n_bar * log_h, inp.n_a * log_h)
    return GlobalEntropy(exact=exact, approx=approx, gap=abs(exact - approx))
