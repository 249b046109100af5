"""Per-state certainty reports: sandwich checks and entropy caps.

The pooled entropy of the direct-sum distribution is capped by the
entropy of the lower envelope ``t``; subtracting the relative entropy
D(P||t) (probability-weighted) tightens the cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import bounds as bd
from . import majorization as mj
from .quantum import (
    DensityMatrix,
    DimensionMismatch,
    born_probabilities,
    is_mub_pair,
    standard_mub_set,
)


@dataclass(frozen=True)
class CertaintyReport:
    """Everything the sandwich and entropy-cap checks produce for one state."""

    P: mj.ProbVector
    t: mj.ProbVector
    s: mj.ProbVector
    sandwich_ok: tuple
    entropy_sum: float
    entropy_cap: float
    tightened_cap: float | None
    slack: dict
    unit: str = "bits"


def state_direct_sum_pdv(observables, rho: DensityMatrix) -> mj.ProbVector:
    """Sorted direct sum of the per-observable outcome distributions."""
    pdvs = [
        mj.from_unsorted(born_probabilities(obs, rho), 1.0) for obs in observables
    ]
    return mj.direct_sum(pdvs)


def certify_state(observables, rho: DensityMatrix, bounds_pair,
                  unit: str = "bits") -> CertaintyReport:
    """Sandwich and entropy report for one state against computed bounds.

    A false sandwich flag is surfaced as-is: it means the state is not
    admissible under the constraint the bounds were computed for, or the
    bounds are wrong.
    """
    observables = list(observables)
    t, s = bounds_pair
    for obs in observables:
        if obs.dim != rho.dim:
            raise DimensionMismatch(
                f"observable dim {obs.dim} vs state dim {rho.dim}"
            )
    pdvs = [mj.from_unsorted(born_probabilities(obs, rho), 1.0) for obs in observables]
    P = mj.direct_sum(pdvs)
    lower_ok = mj.is_majorized_by(t, P)
    upper_ok = mj.is_majorized_by(P, s)
    entropy_sum = float(sum(mj.shannon_entropy(p, unit) for p in pdvs))
    entropy_cap = mj.shannon_entropy(t, unit)
    try:
        # Conventional weighting: D(P||t) = sum_i P_i log(P_i / t_i).
        divergence = mj.relative_entropy_term(P, t, unit)
        tightened_cap = entropy_cap - divergence
    except mj.SupportMismatch:
        tightened_cap = None
    slack = {
        "cap_minus_sum": entropy_cap - entropy_sum,
        "tightened_minus_sum": None if tightened_cap is None else tightened_cap - entropy_sum,
    }
    return CertaintyReport(
        P=P,
        t=t,
        s=s,
        sandwich_ok=(lower_ok, upper_ok),
        entropy_sum=entropy_sum,
        entropy_cap=entropy_cap,
        tightened_cap=tightened_cap,
        slack=slack,
        unit=unit,
    )


def entropic_certainty_bound(t: mj.ProbVector, unit: str = "bits") -> float:
    """Shannon entropy of the lower envelope: the certainty cap."""
    return mj.shannon_entropy(t, unit)


def _binary_entropy_bits(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def sanchez_consistency_check(observables=None,
                              constraint: bd.StateConstraint | None = None,
                              cfg: bd.SolverConfig = bd.SolverConfig()):
    """Check the level-1 certificate of the qubit MUB triple against the
    known entropy cap 3 h(1/2 + 1/(2 sqrt 3)).

    Returns True/False for the qubit three-MUB pure-state configuration
    and None (skipped) for anything else.
    """
    if observables is None:
        observables = standard_mub_set(2)
    if constraint is None:
        constraint = bd.StateConstraint.pure_only()
    observables = list(observables)
    if constraint.kind != "pure_only":
        return None
    if len(observables) != 3 or any(obs.dim != 2 for obs in observables):
        return None
    for i in range(3):
        for j in range(i + 1, 3):
            if not is_mub_pair(observables[i], observables[j], tol=1e-9):
                return None
    cert = bd.min_topn_over_states(observables, 1, constraint, cfg)
    pdv = state_direct_sum_pdv(observables, cert.achieving_state)
    target = 3.0 * _binary_entropy_bits(0.5 + 0.5 / math.sqrt(3.0))
    return bool(abs(mj.shannon_entropy(pdv, "bits") - target) <= 1e-6)
