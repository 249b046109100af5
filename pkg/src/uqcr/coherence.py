"""Coherence vectors and the complementarity envelope between bases.

For a pure state the coherence vector with respect to a basis is just
its sorted outcome distribution, so the envelope machinery applies
verbatim over pure states.  For mixed states the defining supremum runs
over all pure-state decompositions; here it is approximated from below
by folding the lattice join over sampled decompositions and labelled as
such.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bounds as bd
from . import majorization as mj
from .errors import UqcrError
from .quantum import DensityMatrix, ProjectiveObservable


class NotNormalized(UqcrError):
    """State vector is not unit length."""


@dataclass(frozen=True)
class CoherenceSampling:
    """Decomposition sampling knobs for the mixed-state approximation."""

    samples: int = 256
    seed: int = 0


@dataclass(frozen=True)
class CoherenceVector:
    basis_name: str
    vector: mj.ProbVector
    exactness: str  # "exact" | "approximate_lower"


def coherence_vector_pure(psi, basis: ProjectiveObservable) -> CoherenceVector:
    """Sorted squared amplitudes of a unit vector in a rank-1 basis."""
    vec = np.asarray(psi, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
        raise NotNormalized(f"|psi| = {np.linalg.norm(vec)!r}")
    coords = basis.basis_vectors().conj() @ vec
    probs = np.abs(coords) ** 2
    return CoherenceVector(basis.name, mj.from_unsorted(probs, 1.0), "exact")


def _haar_unitary(k: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def coherence_vector_mixed_approx(rho: DensityMatrix, basis: ProjectiveObservable,
                                  cfg: CoherenceSampling = CoherenceSampling()) -> CoherenceVector:
    """Join over sampled pure-state decompositions of ``rho``.

    Every finite decomposition arises from a unitary mixing of the eigen
    ensemble, so the returned vector is majorized by the true coherence
    vector; monotone in the sample count for a fixed seed.
    """
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > 1e-12
    w, v = w[keep], v[:, keep]
    rank = int(w.size)
    bmat = basis.basis_vectors().conj()
    if rank == 1:
        return CoherenceVector(
            basis.name,
            mj.from_unsorted(np.abs(bmat @ v[:, 0]) ** 2, 1.0),
            "exact",
        )
    ensemble = v * np.sqrt(w)[None, :]

    def mixture_vector(columns: np.ndarray) -> mj.ProbVector:
        weights = np.abs(bmat @ columns) ** 2  # (N outcomes, k members)
        weights[::-1].sort(axis=0)
        return mj.from_unsorted(weights.sum(axis=1), 1.0)

    current = mixture_vector(ensemble)
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.samples):
        u = _haar_unitary(rank, rng)
        current = mj.join(current, mixture_vector(ensemble @ u.conj().T))
    return CoherenceVector(basis.name, current, "approximate_lower")


def coherence_complementarity_bounds(bases, cfg: bd.SolverConfig = bd.SolverConfig()):
    """Envelopes (mu_t, mu_s) for the direct sum of coherence vectors.

    Evaluated over pure states, where coherence vectors coincide with
    sorted outcome distributions; needs at least two bases.
    """
    bases = list(bases)
    if len(bases) < 2:
        raise ValueError("complementarity needs at least two bases")
    constraint = bd.StateConstraint.pure_only()
    mu_t, _ = bd.infimum_t(bases, constraint, cfg)
    mu_s, _ = bd.supremum_s(bases, constraint)
    return mu_t, mu_s
