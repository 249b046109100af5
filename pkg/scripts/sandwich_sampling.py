#!/usr/bin/env python3
"""Large-scale sandwich verification against random states.

Computes the envelopes for a chosen configuration, samples admissible
states, and counts prefix-sum violations of t below P below s at a given
tolerance.  Exits non-zero when any violation shows up.
"""

import argparse
import math
import sys

import numpy as np

from uqcr import infimum_t, pauli_observable, standard_mub_set, supremum_s
from uqcr.bounds import SolverConfig, StateConstraint, planar_triple_observables

CONFIGS = {
    "two_paulis": lambda: ([pauli_observable("x"), pauli_observable("z")], "all_states"),
    "tilted_triple": lambda: (planar_triple_observables(math.pi / 4), "pure_only"),
    "qubit_mubs": lambda: (standard_mub_set(2), "pure_only"),
    "qutrit_mubs": lambda: (standard_mub_set(3), "all_states"),
}


def sample_states(dim, kind, count, rng):
    if kind == "pure_only":
        kets = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
        kets /= np.linalg.norm(kets, axis=1)[:, None]
        return kets[:, :, None] * kets[:, None, :].conj()
    g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    mats = g @ np.conj(np.swapaxes(g, -1, -2))
    return mats / np.real(np.trace(mats, axis1=-2, axis2=-1))[:, None, None]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", choices=sorted(CONFIGS), default="qubit_mubs")
    parser.add_argument("--samples", type=int, default=100_000)
    parser.add_argument("--tolerance", type=float, default=1e-8)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    observables, kind = CONFIGS[args.config]()
    constraint = StateConstraint(kind) if kind != "fixed_bloch_norm" else None
    cfg = SolverConfig(seed=args.seed)
    t, _ = infimum_t(observables, constraint, cfg)
    s, _ = supremum_s(observables, constraint)

    rng = np.random.default_rng(args.seed)
    states = sample_states(observables[0].dim, kind, args.samples, rng)
    proj = np.concatenate([np.stack(obs.projectors) for obs in observables])
    probs = np.einsum("sij,pji->sp", states, proj).real
    np.clip(probs, 0.0, 1.0, out=probs)
    probs.sort(axis=1)
    prefix = np.cumsum(probs[:, ::-1], axis=1)

    t_prefix, s_prefix = np.cumsum(t.entries), np.cumsum(s.entries)
    lower_bad = int(np.sum(np.any(prefix < t_prefix[None, :] - args.tolerance, axis=1)))
    upper_bad = int(np.sum(np.any(prefix > s_prefix[None, :] + args.tolerance, axis=1)))
    print(f"config={args.config} samples={args.samples} tolerance={args.tolerance:g}")
    print(f"t = {np.array2string(t.entries, precision=6)}")
    print(f"s = {np.array2string(s.entries, precision=6)}")
    print(f"lower violations: {lower_bad}")
    print(f"upper violations: {upper_bad}")
    return 0 if lower_bad == 0 and upper_bad == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
