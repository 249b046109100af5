"""Shared test utilities: independent oracles and random generators.

Everything here is deliberately written the slow, obvious way so the
library implementations are checked against a different code path.
"""

import numpy as np

from uqcr import ProbVector, from_unsorted, observable_from_basis


def prefix_majorized(a, b, tol=1e-10):
    """Loop-based prefix-sum check that a is majorized by b."""
    ea = list(a.entries) if isinstance(a, ProbVector) else list(a)
    eb = list(b.entries) if isinstance(b, ProbVector) else list(b)
    n = max(len(ea), len(eb))
    ea += [0.0] * (n - len(ea))
    eb += [0.0] * (n - len(eb))
    ca = cb = 0.0
    for x, y in zip(ea, eb):
        ca += x
        cb += y
        if ca > cb + tol:
            return False
    return True


def brute_least_concave_majorant(y):
    """O(n^3) least concave majorant of points (k, y[k]).

    A line through a pair of points is feasible when it lies on or above
    every point; the majorant at k is the smallest feasible line value.
    """
    y = list(map(float, y))
    n = len(y)
    out = []
    for k in range(n):
        best = None
        for i in range(n):
            for j in range(i + 1, n):
                slope = (y[j] - y[i]) / (j - i)
                line = [y[i] + slope * (m - i) for m in range(n)]
                if all(line[m] >= y[m] - 1e-12 for m in range(n)):
                    val = y[i] + slope * (k - i)
                    if best is None or val < best:
                        best = val
        out.append(max(best, y[k]))
    return out


def random_probvector(rng, n, total=1.0):
    raw = rng.uniform(0.05, 1.0, size=n)
    return from_unsorted(raw / raw.sum() * total, total)


def random_orthonormal_basis(dim, rng, name="random"):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return observable_from_basis(q.T, name)


def sample_mixed_states(dim, count, rng):
    g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    mats = g @ np.conj(np.swapaxes(g, -1, -2))
    tr = np.real(np.trace(mats, axis1=-2, axis2=-1))
    return mats / tr[:, None, None]


def sample_pure_states(dim, count, rng):
    kets = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    kets /= np.linalg.norm(kets, axis=1)[:, None]
    return kets[:, :, None] * kets[:, None, :].conj()


def sorted_prefix_matrix(observables, states):
    """Rows: cumulative sums of the sorted direct-sum PDV per state."""
    proj = np.concatenate([np.stack(obs.projectors) for obs in observables])
    probs = np.einsum("sij,pji->sp", states, proj).real
    np.clip(probs, 0.0, 1.0, out=probs)
    probs.sort(axis=1)
    probs = probs[:, ::-1]
    return np.cumsum(probs, axis=1)
