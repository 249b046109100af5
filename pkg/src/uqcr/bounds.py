"""State-independent envelopes on direct-sum measurement distributions.

For M observables with L = sum of outcome counts, the sum of the n
largest entries of the sorted direct-sum distribution equals the largest
trace of a level-n subset operator (a sum of n projectors split across
the observables).  Minimizing that quantity over admissible states for
every level and differencing the minima assembles the greatest lower
bound ``t``; maximizing via largest eigenvalues and flattening with the
least concave majorant assembles the least upper bound ``s``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import majorization as mj
from .errors import UqcrError
from .quantum import (
    DensityMatrix,
    ProjectiveObservable,
    WrongDimension,
    observable_from_bloch_axis,
    pauli_observable,
)

VALID_CONSTRAINTS = ("all_states", "pure_only", "fixed_bloch_norm")


class LevelOutOfRange(UqcrError):
    """Level n must satisfy 1 <= n <= L - 1 (L = total outcome count)."""


class SolverDiverged(UqcrError):
    """Solver could not match the sampling oracle within tolerance."""


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the min-max solver; all runs are deterministic per seed."""

    max_iter: int = 5000
    multistarts: int = 64
    tol: float = 1e-7
    oracle_samples: int = 100_000
    seed: int = 0
    step_scale: float = 0.5


@dataclass(frozen=True)
class StateConstraint:
    """Admissible-state family the extrema range over."""

    kind: str = "all_states"
    r: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in VALID_CONSTRAINTS:
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.kind == "fixed_bloch_norm":
            if self.r is None or not 0.0 <= self.r <= 1.0:
                raise ValueError("fixed_bloch_norm needs a radius in [0, 1]")
        elif self.r is not None:
            raise ValueError(f"{self.kind} takes no radius")

    @classmethod
    def all_states(cls) -> "StateConstraint":
        return cls("all_states")

    @classmethod
    def pure_only(cls) -> "StateConstraint":
        return cls("pure_only")

    @classmethod
    def fixed_bloch_norm(cls, r: float) -> "StateConstraint":
        return cls("fixed_bloch_norm", float(r))


@dataclass(frozen=True)
class SolverDiagnostics:
    iterations: int
    multistart_index: int
    residual: float
    dual_gap: float | None = None
    oracle_min: float | None = None


@dataclass(frozen=True)
class ChoiceOperator:
    """Level-n subset operator: per-observable index sets and their sum."""

    index_sets: tuple
    matrix: np.ndarray
    level: int

    def __post_init__(self) -> None:
        sets = tuple(tuple(int(i) for i in s) for s in self.index_sets)
        if sum(len(s) for s in sets) != self.level:
            raise ValueError("index-set sizes must sum to the level")
        m = np.array(self.matrix, dtype=complex)
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise ValueError("choice operator must be Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "index_sets", sets)
        object.__setattr__(self, "matrix", m)

    @property
    def n_alpha(self) -> tuple:
        return tuple(len(s) for s in self.index_sets)


@dataclass(frozen=True)
class BoundCertificate:
    level: int
    bound_kind: str
    value: float
    achieving_state: DensityMatrix
    achieving_choice: ChoiceOperator
    diagnostics: SolverDiagnostics


# ---------------------------------------------------------------------------
# enumeration and partial sums

def _check_observables(observables) -> tuple[int, int]:
    observables = list(observables)
    if not observables:
        raise ValueError("need at least one observable")
    dim = observables[0].dim
    for obs in observables:
        if obs.dim != dim:
            raise ValueError("observables must share one dimension")
    return dim, sum(obs.outcome_count for obs in observables)


def enumerate_choices(observables, n: int) -> list[ChoiceOperator]:
    """All level-n subset operators across the observables.

    The count is the coefficient of z^n in prod_a (1+z)^(N_a), i.e.
    C(L, n) for L total outcomes.
    """
    observables = list(observables)
    dim, total_outcomes = _check_observables(observables)
    if not 1 <= n <= total_outcomes - 1:
        raise LevelOutOfRange(f"level {n} outside 1..{total_outcomes - 1}")
    counts = [obs.outcome_count for obs in observables]
    choices: list[ChoiceOperator] = []
    for split in _compositions(n, counts):
        subset_pools = [
            list(itertools.combinations(range(c), k)) for c, k in zip(counts, split)
        ]
        for subsets in itertools.product(*subset_pools):
            m = np.zeros((dim, dim), dtype=complex)
            for obs, idx in zip(observables, subsets):
                for i in idx:
                    m = m + obs.projectors[i]
            choices.append(ChoiceOperator(subsets, m, n))
    return choices


def _compositions(n: int, caps: list[int]):
    """Ordered splits (n_1..n_M) with 0 <= n_a <= caps[a] and sum n."""
    if len(caps) == 1:
        if 0 <= n <= caps[0]:
            yield (n,)
        return
    for head in range(min(n, caps[0]) + 1):
        for rest in _compositions(n - head, caps[1:]):
            yield (head,) + rest


def top_n_sum(p: mj.ProbVector, n: int) -> float:
    """Sum of the n largest entries."""
    if not 1 <= n <= len(p):
        raise LevelOutOfRange(f"level {n} outside 1..{len(p)}")
    return float(p.entries[:n].sum())


# ---------------------------------------------------------------------------
# admissible-state sampling (the oracle side of every solve)

def _sample_states(dim: int, constraint: StateConstraint, count: int,
                   rng: np.random.Generator) -> np.ndarray:
    if count <= 0:
        return np.zeros((0, dim, dim), dtype=complex)
    if constraint.kind == "all_states":
        g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
        mats = g @ np.conj(np.swapaxes(g, -1, -2))
        tr = np.real(np.trace(mats, axis1=-2, axis2=-1))
        return mats / tr[:, None, None]
    if constraint.kind == "pure_only":
        kets = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
        kets /= np.linalg.norm(kets, axis=1)[:, None]
        return kets[:, :, None] * kets[:, None, :].conj()
    if dim != 2:
        raise WrongDimension("fixed_bloch_norm is defined for dimension 2 only")
    dirs = rng.standard_normal((count, 3))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    return _bloch_batch(constraint.r * dirs)


def _bloch_batch(rs: np.ndarray) -> np.ndarray:
    out = np.zeros((rs.shape[0], 2, 2), dtype=complex)
    out[:, 0, 0] = 0.5 * (1.0 + rs[:, 2])
    out[:, 1, 1] = 0.5 * (1.0 - rs[:, 2])
    out[:, 0, 1] = 0.5 * (rs[:, 0] - 1j * rs[:, 1])
    out[:, 1, 0] = 0.5 * (rs[:, 0] + 1j * rs[:, 1])
    return out


def _constrain_state(state: np.ndarray, constraint: StateConstraint) -> np.ndarray:
    """Map a pure seed state into the admissible family."""
    if constraint.kind != "fixed_bloch_norm":
        return state
    r = np.array([np.real(np.trace(p @ state)) for p in _pauli_stack()])
    norm = np.linalg.norm(r)
    direction = r / norm if norm > 1e-12 else np.array([0.0, 0.0, 1.0])
    return _bloch_batch((constraint.r * direction)[None])[0]


def _pauli_stack() -> np.ndarray:
    from .quantum import PAULIS

    return np.stack(PAULIS)


class _Oracle:
    """Sampled admissible states with their sorted prefix sums."""

    def __init__(self, proj_stack: np.ndarray, dim: int, constraint: StateConstraint,
                 count: int, rng: np.random.Generator, seed_states: np.ndarray | None):
        sampled = _sample_states(dim, constraint, count, rng)
        if seed_states is not None and seed_states.size:
            sampled = np.concatenate([seed_states, sampled])
        probs = np.einsum("sij,pji->sp", sampled, proj_stack, optimize=True).real
        np.clip(probs, 0.0, 1.0, out=probs)
        order = np.argsort(probs, axis=1)[:, ::-1]
        self.prefix = np.cumsum(np.take_along_axis(probs, order, axis=1), axis=1)
        self.states = sampled

    def min_at(self, level: int) -> tuple[float, np.ndarray]:
        col = self.prefix[:, level - 1]
        idx = int(col.argmin())
        return float(col[idx]), self.states[idx]


# ---------------------------------------------------------------------------
# level minimization

def _project_simplex_rows(w: np.ndarray) -> np.ndarray:
    n = w.shape[1]
    u = np.sort(w, axis=1)[:, ::-1]
    css = np.cumsum(u, axis=1) - 1.0
    idx = np.arange(1, n + 1)
    cond = u - css / idx > 0.0
    last = cond.cumsum(axis=1).argmax(axis=1)
    theta = css[np.arange(w.shape[0]), last] / (last + 1.0)
    return np.maximum(w - theta[:, None], 0.0)


def _project_density_batch(mats: np.ndarray) -> np.ndarray:
    mats = 0.5 * (mats + np.conj(np.swapaxes(mats, -1, -2)))
    w, v = np.linalg.eigh(mats)
    lam = _project_simplex_rows(w)
    out = (v * lam[:, None, :]) @ np.conj(np.swapaxes(v, -1, -2))
    return 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))


def _dual_bound(cmats: np.ndarray, weights: np.ndarray) -> float:
    total = weights.sum()
    if total <= 0.0:
        return -np.inf
    mix = np.einsum("c,cij->ij", weights / total, cmats)
    return float(np.linalg.eigvalsh(mix)[0])


def _kelley_dual_bound(cmats: np.ndarray, max_cuts: int = 80, tol: float = 1e-12) -> float:
    """Maximize lambda_min of a choice mixture over the simplex.

    By minimax duality this equals the minimum over states of the
    pointwise choice-trace maximum.  Kelley cutting planes: each iterate
    contributes the linearization through the bottom eigenvector, and a
    small LP proposes the next mixture.  Returns the best certified
    mixture value (a valid lower bound at every step).
    """
    n = cmats.shape[0]
    q = np.full(n, 1.0 / n)
    grads: list[np.ndarray] = []
    offsets: list[float] = []
    best = -np.inf
    bounds = [(0.0, None)] * n + [(None, None)]
    objective = np.zeros(n + 1)
    objective[n] = -1.0
    a_eq = np.zeros((1, n + 1))
    a_eq[0, :n] = 1.0
    for _ in range(max_cuts):
        mix = np.einsum("c,cij->ij", q, cmats)
        w, v = np.linalg.eigh(mix)
        best = max(best, float(w[0]))
        vec = v[:, 0]
        grad = np.einsum("cij,j,i->c", cmats, vec, vec.conj(), optimize=True).real
        grads.append(grad)
        offsets.append(float(w[0] - grad @ q))
        a_ub = np.zeros((len(grads), n + 1))
        a_ub[:, :n] = -np.stack(grads)
        a_ub[:, n] = 1.0
        res = optimize.linprog(
            objective, A_ub=a_ub, b_ub=np.array(offsets), A_eq=a_eq, b_eq=[1.0],
            bounds=bounds, method="highs",
        )
        if not res.success:
            break
        q = np.maximum(res.x[:n], 0.0)
        q /= q.sum()
        if float(res.x[n]) - best <= tol:
            break
    return best


def _min_level_all_states(cmats: np.ndarray, dim: int, cfg: SolverConfig,
                          rng: np.random.Generator, seed_states: list[np.ndarray]):
    """Projected subgradient descent over the density-matrix set.

    A certified dual bound (lambda_min of the best choice mixture, from
    cutting planes) supplies the Polyak step target; iterates are also
    averaged over a doubling trailing window.  Returns primal value,
    certified lower bound, state, choice index, iterations, start index.
    """
    n_choices = cmats.shape[0]
    gnorm2 = np.maximum(
        np.einsum("cij,cij->c", cmats, cmats.conj()).real, 1e-12
    )
    starts = [np.eye(dim, dtype=complex) / dim]
    starts.extend(seed_states)
    while len(starts) < cfg.multistarts:
        starts.append(_sample_states(dim, StateConstraint.all_states(), 1, rng)[0])
    rho = np.stack(starts[: max(cfg.multistarts, 1)])

    gap_tol = max(1e-12, min(cfg.tol, 1e-9))
    vals = np.einsum("bij,cji->bc", rho, cmats, optimize=True).real
    fk = vals.max(axis=1)
    i = int(fk.argmin())
    best_val = float(fk[i])
    best_state, best_choice, best_start = rho[i].copy(), int(vals[i].argmax()), i

    f_lb = _dual_bound(cmats, np.ones(n_choices))
    iters = 0
    if best_val - f_lb > gap_tol:
        f_lb = max(f_lb, _kelley_dual_bound(cmats))
    if best_val - f_lb > gap_tol:
        avg = np.zeros_like(rho)
        avg_n = 0
        next_restart = 8
        for k in range(1, cfg.max_iter + 1):
            iters = k
            choice_idx = vals.argmax(axis=1)
            # Polyak step toward the certified target, at most c/sqrt(k) long
            polyak = np.maximum(fk - f_lb, 0.0) / gnorm2[choice_idx]
            step = np.minimum(polyak, cfg.step_scale / math.sqrt(k))
            rho = _project_density_batch(rho - step[:, None, None] * cmats[choice_idx])
            vals = np.einsum("bij,cji->bc", rho, cmats, optimize=True).real
            fk = vals.max(axis=1)
            i = int(fk.argmin())
            if fk[i] < best_val:
                best_val = float(fk[i])
                best_state, best_choice, best_start = rho[i].copy(), int(vals[i].argmax()), i
            if best_val - f_lb <= gap_tol:
                break
            # averaging window doubles, spanning a trailing half of the run
            avg += rho
            avg_n += 1
            if k == next_restart:
                next_restart *= 2
                mean_states = _project_density_batch(avg / avg_n)
                mvals = np.einsum("bij,cji->bc", mean_states, cmats, optimize=True).real
                mf = mvals.max(axis=1)
                j = int(mf.argmin())
                if mf[j] < best_val:
                    best_val = float(mf[j])
                    best_state = mean_states[j].copy()
                    best_choice, best_start = int(mvals[j].argmax()), j
                avg = np.zeros_like(rho)
                avg_n = 0
    return best_val, f_lb, best_state, best_choice, iters, best_start


def _min_level_parametrized(cmats: np.ndarray, dim: int, constraint: StateConstraint,
                            cfg: SolverConfig, rng: np.random.Generator,
                            seed_states: list[np.ndarray]):
    """Multistart Nelder-Mead on a direct parametrization of the manifold."""
    if constraint.kind == "fixed_bloch_norm" or dim == 2:
        radius = 1.0 if constraint.kind == "pure_only" else float(constraint.r)
        return _min_level_bloch_sphere(cmats, radius, cfg, rng, seed_states)
    return _min_level_pure_ket(cmats, dim, cfg, rng, seed_states)


_NM_SCAN = {"xatol": 1e-8, "fatol": 1e-10, "maxiter": 800, "maxfev": 1600}
_NM_POLISH = {"xatol": 1e-11, "fatol": 1e-13, "maxiter": 4000, "maxfev": 8000}


def _nm_multistart(objective, x0s, limit):
    """Loose Nelder-Mead scan over all starts, tight restarts on the best."""
    best_val, best_x, best_start, fevs = np.inf, None, -1, 0
    for idx, x0 in enumerate(x0s[:limit]):
        res = optimize.minimize(objective, x0, method="Nelder-Mead", options=_NM_SCAN)
        fevs += res.nfev
        if res.fun < best_val:
            best_val, best_x, best_start = float(res.fun), res.x, idx
    for _ in range(3):
        res = optimize.minimize(objective, best_x, method="Nelder-Mead", options=_NM_POLISH)
        fevs += res.nfev
        if res.fun < best_val:
            best_val, best_x = float(res.fun), res.x
    return best_val, best_x, best_start, fevs


def _min_level_bloch_sphere(cmats, radius, cfg, rng, seed_states):
    paulis = _pauli_stack()
    base = 0.5 * np.real(np.trace(cmats, axis1=-2, axis2=-1))
    wvecs = 0.5 * np.einsum("cij,kji->ck", cmats, paulis, optimize=True).real

    def objective(ang):
        st, ct = math.sin(ang[0]), math.cos(ang[0])
        r = radius * np.array([st * math.cos(ang[1]), st * math.sin(ang[1]), ct])
        return float((base + wvecs @ r).max())

    def angles_of(state):
        r = np.array([np.real(np.trace(p @ state)) for p in paulis])
        norm = np.linalg.norm(r)
        if norm < 1e-12:
            return np.array([0.5 * math.pi, 0.0])
        r = r / norm
        return np.array([math.acos(np.clip(r[2], -1, 1)), math.atan2(r[1], r[0])])

    x0s = [angles_of(s) for s in seed_states]
    while len(x0s) < cfg.multistarts:
        x0s.append(np.array([math.acos(rng.uniform(-1, 1)), rng.uniform(-math.pi, math.pi)]))
    best_val, best_x, best_start, fevs = _nm_multistart(objective, x0s, cfg.multistarts)
    st, ct = math.sin(best_x[0]), math.cos(best_x[0])
    r = radius * np.array([st * math.cos(best_x[1]), st * math.sin(best_x[1]), ct])
    state = _bloch_batch(r[None])[0]
    vals = base + wvecs @ r
    return best_val, -np.inf, state, int(vals.argmax()), fevs, best_start


def _ket_from_chart(x: np.ndarray, dim: int) -> np.ndarray:
    """Unit ket from hyperspherical magnitudes and explicit phases.

    2(dim-1) parameters, no gauge freedom: the first amplitude is real.
    """
    angles = x[: dim - 1]
    phases = x[dim - 1:]
    amps = np.ones(dim)
    for j in range(dim - 1):
        c, s = math.cos(angles[j]), math.sin(angles[j])
        amps[j] *= c
        amps[j + 1:] *= s
    psi = amps.astype(complex)
    psi[1:] *= np.exp(1j * phases)
    return psi


def _chart_from_ket(ket: np.ndarray, dim: int) -> np.ndarray:
    pivot = int(np.argmax(np.abs(ket)))
    phase = ket[pivot] / abs(ket[pivot])
    psi = ket / phase
    psi = psi * np.exp(-1j * np.angle(psi[0])) if abs(psi[0]) > 1e-12 else psi
    amps = np.abs(psi)
    angles = np.zeros(dim - 1)
    tail = 1.0
    for j in range(dim - 1):
        ratio = np.clip(amps[j] / tail, -1.0, 1.0) if tail > 1e-12 else 1.0
        angles[j] = math.acos(ratio)
        tail *= math.sin(angles[j])
    phases = np.angle(psi[1:])
    return np.concatenate([angles, phases])


def _min_level_pure_ket(cmats, dim, cfg, rng, seed_states):
    cflat = cmats.reshape(cmats.shape[0], -1)

    def objective(x):
        psi = _ket_from_chart(x, dim)
        rho_vec = (psi[:, None] * psi.conj()[None, :]).ravel().conj()
        return float((cflat @ rho_vec).real.max())

    def params_of(state):
        w, v = np.linalg.eigh(state)
        return _chart_from_ket(v[:, -1], dim)

    x0s = [params_of(s) for s in seed_states]
    while len(x0s) < cfg.multistarts:
        ket = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        ket /= np.linalg.norm(ket)
        x0s.append(_chart_from_ket(ket, dim))
    best_val, best_x, best_start, fevs = _nm_multistart(objective, x0s, cfg.multistarts)
    psi = _ket_from_chart(best_x, dim)
    state = np.outer(psi, psi.conj())
    vals = np.einsum("i,cij,j->c", psi.conj(), cmats, psi, optimize=True).real
    return best_val, -np.inf, state, int(vals.argmax()), fevs, best_start


def _eig_seed_states(cmats: np.ndarray) -> np.ndarray:
    """Eigenprojectors of every choice operator, natural extremum seeds."""
    w, v = np.linalg.eigh(cmats)
    kets = np.concatenate([v[:, :, 0], v[:, :, -1]])
    return kets[:, :, None] * kets[:, None, :].conj()


def _solve_min_level(observables, choices, constraint, cfg, rng, oracle):
    dim = observables[0].dim
    cmats = np.stack([c.matrix for c in choices])
    n = choices[0].level
    oracle_min, oracle_state = oracle.min_at(n)
    eig_states = _eig_seed_states(cmats)
    seeds = [oracle_state]
    seeds.extend(
        _constrain_state(s, constraint) for s in eig_states[: cfg.multistarts // 2]
    )
    if constraint.kind == "all_states":
        value, dual, state, cidx, iters, start = _min_level_all_states(
            cmats, dim, cfg, rng, seeds
        )
    else:
        value, dual, state, cidx, iters, start = _min_level_parametrized(
            cmats, dim, constraint, cfg, rng, seeds
        )
    residual = value - oracle_min
    if residual > cfg.tol:
        raise SolverDiverged(
            f"level {n}: solver value {value!r} exceeds oracle minimum "
            f"{oracle_min!r} by more than tol={cfg.tol!r}"
        )
    if oracle_min < value:
        value, state = oracle_min, oracle_state
        vals = np.einsum("ij,cji->c", state, cmats, optimize=True).real
        cidx = int(vals.argmax())
    # assembly uses the certified side: the dual bound never exceeds the
    # true minimum, so envelopes built from it stay valid lower bounds
    assembly = dual if np.isfinite(dual) else value
    assembly = min(assembly, value)
    diag = SolverDiagnostics(
        iterations=iters,
        multistart_index=start,
        residual=float(residual),
        dual_gap=float(value - dual) if np.isfinite(dual) else None,
        oracle_min=float(oracle_min),
    )
    cert = BoundCertificate(
        level=n,
        bound_kind="min",
        value=float(value),
        achieving_state=DensityMatrix(state),
        achieving_choice=choices[cidx],
        diagnostics=diag,
    )
    return cert, float(assembly)


def min_topn_over_states(observables, n: int,
                         constraint: StateConstraint = StateConstraint.all_states(),
                         cfg: SolverConfig = SolverConfig()) -> BoundCertificate:
    """Minimum over admissible states of the top-n sum of the direct-sum PDV."""
    observables = list(observables)
    dim, _ = _check_observables(observables)
    choices = enumerate_choices(observables, n)
    ss = np.random.SeedSequence((cfg.seed, n))
    rng_oracle, rng_solve = (np.random.default_rng(s) for s in ss.spawn(2))
    proj_stack = np.concatenate([np.stack(obs.projectors) for obs in observables])
    eig_states = _eig_seed_states(np.stack([c.matrix for c in choices]))
    eig_states = np.stack([_constrain_state(s, constraint) for s in eig_states])
    oracle = _Oracle(proj_stack, dim, constraint, cfg.oracle_samples, rng_oracle, eig_states)
    cert, _ = _solve_min_level(observables, choices, constraint, cfg, rng_solve, oracle)
    return cert


def max_topn_over_states(observables, n: int,
                         constraint: StateConstraint = StateConstraint.all_states()) -> BoundCertificate:
    """Maximum top-n sum: the largest eigenvalue over the level-n choices."""
    observables = list(observables)
    _check_observables(observables)
    choices = enumerate_choices(observables, n)
    cmats = np.stack([c.matrix for c in choices])
    w, v = np.linalg.eigh(cmats)
    if constraint.kind == "fixed_bloch_norm":
        if observables[0].dim != 2:
            raise WrongDimension("fixed_bloch_norm is defined for dimension 2 only")
        half_tr = 0.5 * np.real(np.trace(cmats, axis1=-2, axis2=-1))
        vals = half_tr + constraint.r * (w[:, -1] - half_tr)
        best = int(vals.argmax())
        ket = v[best][:, -1]
        pure = np.outer(ket, ket.conj())
        state = DensityMatrix(_constrain_state(pure, constraint))
        value = float(vals[best])
    else:
        vals = w[:, -1]
        best = int(vals.argmax())
        ket = v[best][:, -1]
        state = DensityMatrix(np.outer(ket, ket.conj()))
        value = float(vals[best])
    diag = SolverDiagnostics(iterations=0, multistart_index=0, residual=0.0)
    return BoundCertificate(n, "max", value, state, choices[best], diag)


# ---------------------------------------------------------------------------
# envelope assembly

def infimum_t(observables,
              constraint: StateConstraint = StateConstraint.all_states(),
              cfg: SolverConfig = SolverConfig()) -> tuple[mj.ProbVector, list[BoundCertificate]]:
    """Greatest lower bound of the direct-sum PDV over admissible states.

    Entries are differences of consecutive level minima (levels 0 and L
    are pinned to 0 and M); the resulting prefix curve is concave up to
    solver noise, which a pool-adjacent-violators pass removes.
    """
    observables = list(observables)
    dim, total_outcomes = _check_observables(observables)
    n_obs = len(observables)
    all_choices = [enumerate_choices(observables, n) for n in range(1, total_outcomes)]
    ss = np.random.SeedSequence((cfg.seed, 0x1F))
    rng_oracle, *rng_levels = (
        np.random.default_rng(s) for s in ss.spawn(total_outcomes)
    )
    proj_stack = np.concatenate([np.stack(obs.projectors) for obs in observables])
    eig_states = np.concatenate(
        [_eig_seed_states(np.stack([c.matrix for c in choices])) for choices in all_choices]
    )
    eig_states = np.stack([_constrain_state(s, constraint) for s in eig_states])
    oracle = _Oracle(proj_stack, dim, constraint, cfg.oracle_samples, rng_oracle, eig_states)

    certificates = []
    minima = [0.0]
    for choices, rng in zip(all_choices, rng_levels):
        cert, assembly = _solve_min_level(observables, choices, constraint, cfg, rng, oracle)
        certificates.append(cert)
        minima.append(assembly)
    minima.append(float(n_obs))
    entries = np.diff(np.maximum.accumulate(minima))
    entries = mj._isotonic_nonincreasing(entries, tol=1e-6)
    np.clip(entries, 0.0, None, out=entries)
    entries[0] += n_obs - entries.sum()
    return mj.ProbVector(entries, float(n_obs)), certificates


def supremum_s(observables,
               constraint: StateConstraint = StateConstraint.all_states()) -> tuple[mj.ProbVector, list[BoundCertificate]]:
    """Least upper bound of the direct-sum PDV over admissible states.

    Per-level maxima are exact largest eigenvalues; their sequence need
    not be concave, so the least concave majorant flattens it before
    differencing.
    """
    observables = list(observables)
    _, total_outcomes = _check_observables(observables)
    n_obs = len(observables)
    certificates = []
    maxima = [0.0]
    for n in range(1, total_outcomes):
        cert = max_topn_over_states(observables, n, constraint)
        certificates.append(cert)
        maxima.append(cert.value)
    maxima.append(float(n_obs))
    flat = mj.least_concave_majorant(np.array(maxima))
    entries = np.diff(flat)
    entries = mj._isotonic_nonincreasing(entries, tol=1e-9)
    np.clip(entries, 0.0, None, out=entries)
    entries[0] += n_obs - entries.sum()
    return mj.ProbVector(entries, float(n_obs)), certificates


def two_basis_trivial_bound(dim: int) -> mj.ProbVector:
    """Uniform lower envelope (1/N, ..., 1/N) for any two orthonormal bases."""
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    return mj.ProbVector(np.full(2 * dim, 1.0 / dim), 2.0)


# ---------------------------------------------------------------------------
# closed-form qubit envelopes (analytic oracles for the solver)

def planar_triple_observables(phi: float) -> list[ProjectiveObservable]:
    """Qubit triple: axis tilted by phi from x toward y, plus sigma_y, sigma_z."""
    tilted = observable_from_bloch_axis(
        (math.cos(phi), math.sin(phi), 0.0), f"tilted_{phi:.6g}"
    )
    return [tilted, pauli_observable("y"), pauli_observable("z")]


def qubit_planar_triple_t(phi: float, r_norm: float) -> mj.ProbVector:
    """Closed-form infimum for the tilted planar triple at Bloch radius r.

    The first level is minimized by the balanced direction with
    cos(theta) = 1 / sqrt(1 + 1/sin(pi/4 - phi/2)^2); the middle levels by
    the x axis, contributing cos(phi) cross terms.
    """
    if not 0.0 <= r_norm <= 1.0:
        raise ValueError("Bloch radius must lie in [0, 1]")
    azimuth = 0.25 * math.pi - 0.5 * phi
    s = math.sin(azimuth)
    cos_theta = s / math.sqrt(1.0 + s * s)
    c1 = r_norm * cos_theta
    c2 = r_norm * math.cos(phi)
    entries = [
        0.5 + 0.5 * c1,
        0.5 + 0.5 * (c2 - c1),
        0.5,
        0.5,
        0.5 - 0.5 * (c2 - c1),
        0.5 - 0.5 * c1,
    ]
    return mj.from_unsorted(entries, 3.0)


def qubit_mub_t(r_norm: float) -> mj.ProbVector:
    """Closed-form infimum for the three qubit MUBs at Bloch radius r."""
    if not 0.0 <= r_norm <= 1.0:
        raise ValueError("Bloch radius must lie in [0, 1]")
    a = r_norm / (2.0 * math.sqrt(3.0))
    b = r_norm / 2.0
    entries = [0.5 + a, 0.5 + b - a, 0.5, 0.5, 0.5 - b + a, 0.5 - a]
    return mj.from_unsorted(entries, 3.0)
