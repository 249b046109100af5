import math

import numpy as np
import pytest

from uqcr import (
    DensityMatrix,
    ProbVector,
    ProjectiveObservable,
    bloch_to_density,
    enumerate_choices,
    infimum_t,
    max_topn_over_states,
    min_topn_over_states,
    pauli_observable,
    qubit_mub_t,
    qubit_planar_triple_t,
    random_density,
    standard_mub_set,
    state_direct_sum_pdv,
    supremum_s,
    top_n_sum,
    two_basis_trivial_bound,
)
from uqcr.bounds import (
    LevelOutOfRange,
    SolverConfig,
    StateConstraint,
    planar_triple_observables,
)

from helpers import (
    prefix_majorized,
    random_orthonormal_basis,
    sample_pure_states,
    sorted_prefix_matrix,
)

# closed-form constants, evaluated independently of the library
COS_THETA = math.sqrt((2 - math.sqrt(2)) / (6 - math.sqrt(2)))
M1_TILTED = 0.5 + 0.5 * COS_THETA          # 0.678703...
M2_TILTED = 1.0 + 0.5 * math.cos(math.pi / 4)  # 1.353553...
MUB_HI = 0.5 + 0.5 / math.sqrt(3)          # 0.788675...

XZ = [pauli_observable("x"), pauli_observable("z")]
FAST = SolverConfig(seed=5, oracle_samples=20_000)


@pytest.fixture(scope="module")
def tilted_pure():
    obs = planar_triple_observables(math.pi / 4)
    t, certs = infimum_t(obs, StateConstraint.pure_only(), FAST)
    return obs, t, certs


@pytest.fixture(scope="module")
def mub_pure():
    obs = standard_mub_set(2)
    t, certs = infimum_t(obs, StateConstraint.pure_only(), FAST)
    return obs, t, certs


# ---------------------------------------------------------------------------
# enumeration

def test_choice_counts():
    assert len(enumerate_choices(XZ, 1)) == 4
    assert len(enumerate_choices(XZ, 2)) == 6
    three = planar_triple_observables(0.5)
    assert len(enumerate_choices(three, 3)) == 20
    with pytest.raises(LevelOutOfRange):
        enumerate_choices(XZ, 0)
    with pytest.raises(LevelOutOfRange):
        enumerate_choices(XZ, 4)


def test_choice_operator_invariants():
    for n in (1, 2, 3):
        for choice in enumerate_choices(XZ, n):
            w = np.linalg.eigvalsh(choice.matrix)
            assert w[0] >= -1e-10
            assert w[-1] <= 2 + 1e-10
            assert sum(choice.n_alpha) == n


def test_top_n_sum_basics():
    p = ProbVector(np.array([0.7, 0.6, 0.4, 0.3]), 2.0)
    assert top_n_sum(p, 2) == pytest.approx(1.3)
    uniform = ProbVector(np.full(6, 0.5), 3.0)
    for n in range(1, 7):
        assert top_n_sum(uniform, n) == pytest.approx(n * 0.5)
    with pytest.raises(LevelOutOfRange):
        top_n_sum(p, 5)


def test_top_n_equals_choice_maximum(rng):
    # sorted prefix sums coincide with the best subset-operator trace
    choices = {n: enumerate_choices(XZ, n) for n in (1, 2, 3)}
    for _ in range(200):
        rho = random_density(2, int(rng.integers(1, 3)), rng)
        pdv = state_direct_sum_pdv(XZ, rho)
        for n, level_choices in choices.items():
            traces = [
                float(np.real(np.trace(c.matrix @ rho.matrix)))
                for c in level_choices
            ]
            assert top_n_sum(pdv, n) == pytest.approx(max(traces), abs=1e-10)


# ---------------------------------------------------------------------------
# level minima

def test_min_level_two_paulis():
    cert = min_topn_over_states(XZ, 1, StateConstraint.all_states(), FAST)
    assert cert.value == pytest.approx(0.5, abs=1e-6)
    cert2 = min_topn_over_states(XZ, 2, StateConstraint.all_states(), FAST)
    assert cert2.value == pytest.approx(1.0, abs=1e-6)


def test_min_certificate_reproduces_value(tilted_pure):
    _, _, certs = tilted_pure
    for cert in certs:
        reproduced = float(
            np.real(np.trace(cert.achieving_choice.matrix @ cert.achieving_state.matrix))
        )
        assert abs(reproduced - cert.value) <= 1e-7
        assert cert.diagnostics.oracle_min is not None
        assert cert.value <= cert.diagnostics.oracle_min + 1e-6


def test_min_levels_tilted_triple(tilted_pure):
    _, _, certs = tilted_pure
    m = {c.level: c.value for c in certs}
    assert m[1] == pytest.approx(M1_TILTED, abs=1e-6)
    assert m[2] == pytest.approx(M2_TILTED, abs=1e-6)


def test_min_level_fixed_norm_matches_pure():
    obs = planar_triple_observables(math.pi / 4)
    cert = min_topn_over_states(obs, 1, StateConstraint.fixed_bloch_norm(1.0), FAST)
    assert cert.value == pytest.approx(M1_TILTED, abs=1e-6)


# ---------------------------------------------------------------------------
# infimum assembly

def test_infimum_two_paulis_trivial():
    t, certs = infimum_t(XZ, StateConstraint.all_states(), FAST)
    assert np.allclose(t.entries, 0.5, atol=1e-6)
    values = [0.0] + [c.value for c in certs] + [2.0]
    assert np.all(np.diff(values) >= -1e-9)          # level consistency
    assert np.all(np.diff(values, 2) <= 1e-8)        # concavity


def test_infimum_tilted_triple_closed_form(tilted_pure):
    _, t, _ = tilted_pure
    closed = qubit_planar_triple_t(math.pi / 4, 1.0)
    assert np.allclose(t.entries, closed.entries, atol=1e-6)


def test_infimum_mub_closed_form(mub_pure):
    _, t, _ = mub_pure
    closed = qubit_mub_t(1.0)
    assert np.allclose(t.entries, closed.entries, atol=1e-6)
    expected = [MUB_HI, 1 - 1 / (2 * math.sqrt(3)), 0.5, 0.5,
                1 / (2 * math.sqrt(3)), 0.5 - 1 / (2 * math.sqrt(3))]
    assert np.allclose(closed.entries, expected, atol=1e-12)


def test_infimum_mub_mixed_is_trivial():
    t, _ = infimum_t(standard_mub_set(2), StateConstraint.all_states(), FAST)
    assert np.allclose(t.entries, 0.5, atol=1e-6)


def test_infimum_sandwiches_samples(mub_pure, rng):
    obs, t, _ = mub_pure
    states = sample_pure_states(2, 500, rng)
    prefix = sorted_prefix_matrix(obs, states)
    t_prefix = np.cumsum(t.entries)
    assert np.all(prefix >= t_prefix[None, :] - 1e-8)


def test_complement_symmetry_identity():
    # +/- symmetric qubit configurations: m_n + M - m_{L-n} = n,
    # verified against an independently seeded second solve
    for obs in (planar_triple_observables(math.pi / 4), standard_mub_set(2)):
        _, certs = infimum_t(obs, StateConstraint.pure_only(), FAST)
        _, certs2 = infimum_t(
            obs, StateConstraint.pure_only(), SolverConfig(seed=91, oracle_samples=20_000)
        )
        m = {c.level: c.value for c in certs}
        m2 = {c.level: c.value for c in certs2}
        for n in (1, 2):
            assert m[n] + 3.0 - m2[6 - n] == pytest.approx(n, abs=1e-5)


def test_solver_determinism():
    t1, _ = infimum_t(XZ, StateConstraint.all_states(), FAST)
    t2, _ = infimum_t(XZ, StateConstraint.all_states(), FAST)
    assert np.array_equal(t1.entries, t2.entries)


# ---------------------------------------------------------------------------
# supremum

def test_supremum_two_paulis():
    s, certs = supremum_s(XZ)
    expected = [1.0, 1 / math.sqrt(2), 1 - 1 / math.sqrt(2), 0.0]
    assert np.allclose(s.entries, expected, atol=1e-9)
    # certificate values are exact top eigenvalues
    for cert in certs:
        w = np.linalg.eigvalsh(cert.achieving_choice.matrix)
        assert cert.value == pytest.approx(w[-1], abs=1e-9)


def test_supremum_mub_eigen_sequence():
    s, certs = supremum_s(standard_mub_set(2))
    maxima = [0.0] + [c.value for c in certs] + [3.0]
    expected = [0.0, 1.0, 1 + 1 / math.sqrt(2), 1.5 + math.sqrt(3) / 2,
                2 + 1 / math.sqrt(2), 3.0, 3.0]
    assert np.allclose(maxima, expected, atol=1e-9)
    assert np.allclose(np.cumsum(s.entries), np.maximum.accumulate(expected[1:]), atol=1e-9)


def test_supremum_single_observable():
    s, _ = supremum_s([pauli_observable("z")])
    assert np.allclose(s.entries, [1.0, 0.0], atol=1e-12)


def test_supremum_fixed_norm_interpolates():
    s1, _ = supremum_s(XZ, StateConstraint.fixed_bloch_norm(1.0))
    s_all, _ = supremum_s(XZ)
    assert np.allclose(s1.entries, s_all.entries, atol=1e-9)
    s0, _ = supremum_s(XZ, StateConstraint.fixed_bloch_norm(0.0))
    assert np.allclose(s0.entries, 0.5, atol=1e-9)


# ---------------------------------------------------------------------------
# closed forms and the trivial two-basis bound

def test_two_basis_trivial_bound_values():
    b2 = two_basis_trivial_bound(2)
    assert np.allclose(b2.entries, 0.5) and b2.total == 2.0
    b3 = two_basis_trivial_bound(3)
    assert np.allclose(b3.entries, 1 / 3) and len(b3) == 6


def test_two_basis_random_pair_matches_trivial(rng):
    pair = [random_orthonormal_basis(2, rng, "a"), random_orthonormal_basis(2, rng, "b")]
    t, _ = infimum_t(pair, StateConstraint.all_states(), FAST)
    assert np.allclose(t.entries, two_basis_trivial_bound(2).entries, atol=1e-5)


def test_planar_triple_closed_form_properties():
    first = qubit_planar_triple_t(math.pi / 4, 1.0).entries[0]
    assert first == pytest.approx(M1_TILTED, abs=1e-12)
    assert np.allclose(qubit_planar_triple_t(math.pi / 4, 0.0).entries, 0.5)
    for r in (0.0, 0.3, 0.7, 1.0):
        assert np.allclose(
            qubit_planar_triple_t(0.0, r).entries, qubit_mub_t(r).entries, atol=1e-12
        )
    with pytest.raises(ValueError):
        qubit_mub_t(1.5)


def test_solver_matches_closed_form_general_phi():
    obs = planar_triple_observables(0.3)
    t, _ = infimum_t(obs, StateConstraint.pure_only(), FAST)
    assert np.allclose(t.entries, qubit_planar_triple_t(0.3, 1.0).entries, atol=1e-6)


def test_fixed_norm_mid_radius_matches_closed_form():
    obs = planar_triple_observables(math.pi / 4)
    t, _ = infimum_t(obs, StateConstraint.fixed_bloch_norm(0.6), FAST)
    assert np.allclose(t.entries, qubit_planar_triple_t(math.pi / 4, 0.6).entries, atol=1e-6)


# ---------------------------------------------------------------------------
# constraint validation

def test_degenerate_projectors_need_real_solve():
    # coarse outcome (rank-2) plus a fine basis: the uniform-mixture dual
    # floor (0.4) sits below the true level-1 minimum (0.5)
    blocks = ProjectiveObservable(
        (np.diag([1.0, 1.0, 0.0]).astype(complex), np.diag([0.0, 0.0, 1.0]).astype(complex)),
        "coarse",
    )
    fine = ProjectiveObservable(
        tuple(np.outer(e, e.conj()) for e in np.eye(3, dtype=complex)), "fine"
    )
    cfg = SolverConfig(seed=1, oracle_samples=20_000)
    cert = min_topn_over_states([blocks, fine], 1, StateConstraint.all_states(), cfg)
    assert cert.value == pytest.approx(0.5, abs=1e-6)
    assert cert.diagnostics.dual_gap is not None and cert.diagnostics.dual_gap <= 1e-6
    t, _ = infimum_t([blocks, fine], StateConstraint.all_states(), cfg)
    assert np.allclose(t.entries, [0.5, 0.5, 1 / 3, 1 / 3, 1 / 3], atol=1e-6)


def test_qutrit_mub_set_envelopes(rng):
    # four observables in dimension 3 (largest shipped configuration)
    obs = standard_mub_set(3)
    t, _ = infimum_t(obs, StateConstraint.all_states(), SolverConfig(seed=3, oracle_samples=5_000))
    s, _ = supremum_s(obs)
    assert np.allclose(t.entries, 1 / 3, atol=1e-6)
    from helpers import sample_mixed_states

    states = sample_mixed_states(3, 2_000, rng)
    prefix = sorted_prefix_matrix(obs, states)
    assert np.all(prefix >= np.cumsum(t.entries)[None, :] - 1e-8)
    assert np.all(prefix <= np.cumsum(s.entries)[None, :] + 1e-8)


def test_dim3_pure_pair_uniform(rng):
    # a vector unbiased to both bases exists, so every level minimum is n/3
    pair = standard_mub_set(3)[:2]
    cfg = SolverConfig(seed=3, multistarts=24, oracle_samples=10_000)
    t, certs = infimum_t(pair, StateConstraint.pure_only(), cfg)
    assert np.allclose(t.entries, 1 / 3, atol=1e-6)
    states = sample_pure_states(3, 2_000, rng)
    prefix = sorted_prefix_matrix(pair, states)
    assert np.all(prefix >= np.cumsum(t.entries)[None, :] - 1e-8)


def test_state_constraint_validation():
    with pytest.raises(ValueError):
        StateConstraint("everything")
    with pytest.raises(ValueError):
        StateConstraint.fixed_bloch_norm(1.5)
    with pytest.raises(ValueError):
        StateConstraint("pure_only", 0.5)
    assert StateConstraint.all_states().kind == "all_states"


def test_solver_config_defaults():
    cfg = SolverConfig()
    assert cfg.max_iter == 5000
    assert cfg.multistarts == 64
    assert cfg.tol == 1e-7
    assert cfg.oracle_samples == 100_000
