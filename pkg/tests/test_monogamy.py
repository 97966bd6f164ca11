import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

from sqdiscord.dynamics import output_state
from sqdiscord.monogamy import (
    CAVITY_COMPONENTS,
    CorrelationCache,
    IndicatorSet,
    entanglement_indicators,
    monogamy_condition,
    monogamy_score,
    pure3_batch,
    q3_mean,
    q3_mixed_indicator,
    q3_pure,
    q3_symmetric_mixed,
    q4_components,
    score_difference,
    sqd_decomposition,
)
from sqdiscord.qstate import (
    PureState,
    RankError,
    binary_entropy,
    build_named_state,
    haar_amplitudes,
    partial_trace,
    random_pure_haar,
    von_neumann_entropy,
)

GHZ3 = build_named_state("ghz3", [1 / math.sqrt(2)])


def product_a_bc(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    bc = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return PureState.from_vector(np.kron(a, bc))


def product_all(seed):
    rng = np.random.default_rng(seed)
    v = [rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(4)]
    return PureState.from_vector(np.kron(np.kron(v[0], v[1]), np.kron(v[2], v[3])))


# --- three-qubit pure states

def test_ghz_decomposition():
    rep = sqd_decomposition(GHZ3)
    assert rep.d2_pairs == pytest.approx((0, 0), abs=1e-12)
    assert rep.total == pytest.approx(1.0)
    assert monogamy_condition(rep)


def test_product_decomposition_is_zero():
    rep = sqd_decomposition(product_a_bc(1))
    assert rep.d2_joint == pytest.approx(0, abs=1e-12)
    assert rep.total == pytest.approx(0, abs=1e-12)
    assert monogamy_condition(rep)


@pytest.mark.parametrize("seed", range(10))
def test_report_invariants(seed):
    psi = random_pure_haar(3, seed)
    for pivot in "ABC":
        rep = sqd_decomposition(psi, pivot)
        assert rep.total == pytest.approx(rep.d2_joint - sum(rep.d2_pairs), abs=1e-10)
        assert rep.total == pytest.approx(rep.t1 + rep.t2, abs=1e-8)
        assert monogamy_condition(rep)


def test_pairwise_terms_match_numeric_discord():
    from sqdiscord.discord import quantum_discord
    psi = random_pure_haar(3, 31)
    rep = sqd_decomposition(psi)
    assert rep.d_pairs[0] == pytest.approx(quantum_discord(psi, "A", "B", "numeric").discord,
                                           abs=1e-4)
    assert rep.d_pairs[1] == pytest.approx(quantum_discord(psi, "A", "C", "numeric").discord,
                                           abs=1e-4)


def test_w3_maximum_over_assignments():
    values = [q3_pure(build_named_state("w3", perm), pivot)
              for perm in itertools.permutations([0.5, 0.5, math.sqrt(0.5)]) for pivot in range(3)]
    assert max(values) == pytest.approx(0.2779, abs=1e-3)


def test_w3_pivot_carries_large_amplitude():
    psi = build_named_state("w3", [0.5, 0.5, 0.70710678])
    assert q3_pure(psi, "A") == pytest.approx(0.2779, abs=1e-3)


@pytest.mark.parametrize("alpha", [0.3, 0.6, 1 / math.sqrt(2), 0.9])
def test_ghz_q3_is_squared_entropy(alpha):
    psi = build_named_state("ghz3", [alpha])
    assert q3_pure(psi) == pytest.approx(binary_entropy(alpha ** 2) ** 2, abs=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_q3_zero_on_bipartite_product(seed):
    psi = product_a_bc(seed)
    assert q3_pure(psi, "A") < 1e-6
    # product across A|BC also leaves B and C with no genuine tripartite share
    assert q3_pure(psi, "B") < 1e-6


def test_q3_positive_on_random_states():
    for seed in range(10):
        assert q3_pure(random_pure_haar(3, seed)) > 0


def test_q3_routes_agree():
    psi = random_pure_haar(3, 8)
    assert q3_pure(psi, route="analytic") == pytest.approx(
        q3_pure(psi, route="distribution"), abs=1e-4)
    with pytest.raises(ValueError):
        q3_pure(psi, route="other")


def test_q3_mean_examples():
    assert q3_mean(GHZ3) == pytest.approx(1.0)
    prod = PureState.from_vector(np.kron(np.kron([1, 2], [3, 1j]), [1, 1]))
    assert q3_mean(prod) == pytest.approx(0.0, abs=1e-12)


def test_q3_asymmetric_for_acin_state():
    psi = build_named_state("acin", [0.4, 0.9, 0.3, 1.1])
    per_pivot = [q3_pure(psi, p) for p in range(3)]
    assert max(per_pivot) - min(per_pivot) > 1e-3
    assert q3_mean(psi) == pytest.approx(sum(per_pivot) / 3)


def test_score_difference_against_product_is_q3():
    psi = random_pure_haar(3, 4)
    ref = product_a_bc(4)
    assert monogamy_score(ref) == pytest.approx(0.0, abs=1e-9)
    assert score_difference(psi, ref) == pytest.approx(q3_pure(psi), abs=1e-4)


@pytest.mark.parametrize("seed", range(4))
def test_q3_local_unitary_invariance(seed):
    psi = random_pure_haar(3, 50 + seed)
    u = np.kron(np.kron(*(unitary_group.rvs(2, random_state=seed + i) for i in range(2))),
                unitary_group.rvs(2, random_state=seed + 9))
    rotated = PureState(u @ psi.amplitudes)
    for p in range(3):
        assert q3_pure(rotated, p) == pytest.approx(q3_pure(psi, p), abs=1e-8)


# --- batch kernel

def test_batch_matches_scalar():
    amps = haar_amplitudes(3, 30, seed=2)
    for pivot in range(3):
        batch = pure3_batch(amps, pivot)
        for i in range(30):
            psi = PureState(amps[i])
            rep = sqd_decomposition(psi, pivot)
            assert batch["sqd_dist"][i] == pytest.approx(rep.total, abs=1e-9)
            assert batch["t1"][i] == pytest.approx(rep.t1, abs=1e-9)
            assert batch["t2"][i] == pytest.approx(rep.t2, abs=1e-9)
            assert batch["qd_dist"][i] == pytest.approx(rep.qd_total, abs=1e-9)


def test_hierarchy_identity():
    amps = haar_amplitudes(3, 200, seed=3)
    b = pure3_batch(amps)
    q3 = b["sqd_dist"]
    np.testing.assert_allclose(b["S_A"] ** 2, b["D_AB"] ** 2 + b["D_AC"] ** 2 + q3, atol=1e-10)


def test_same_sign_and_strengthened_bound():
    b = pure3_batch(haar_amplitudes(3, 500, seed=4))
    diff = b["Ef_AC"] - b["Ef_AB"]
    cond = b["S_C"] - b["S_B"]
    both = (np.abs(diff) > 1e-8) & (np.abs(cond) > 1e-8)
    assert np.all(np.sign(diff[both]) == np.sign(cond[both]))
    assert np.all(np.abs(diff) - np.abs(cond) >= -1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_theorem_terms_nonnegative(seed):
    b = pure3_batch(haar_amplitudes(3, 64, seed))
    for name in ("sqd_dist", "t1", "t2", "three_tangle"):
        assert b[name].min() >= -1e-9


# --- mixed states

def test_rank2_w_distribution_is_negative():
    rho = build_named_state("rank2_w", [0.4 * math.pi] * 3)
    cache = CorrelationCache(rho)
    assert cache.d2("A", "BC") == pytest.approx(0.10845, abs=2e-4)
    assert cache.d2("A", "B") == pytest.approx(0.02368, abs=2e-4)
    assert cache.d2("A", "C") == pytest.approx(0.08994, abs=2e-4)
    assert q3_mixed_indicator(rho, "A", cache=cache) == pytest.approx(-0.00517, abs=2e-4)


def test_mixed_indicator_on_pure_input_equals_q3():
    psi = random_pure_haar(3, 12)
    assert q3_mixed_indicator(psi.density_matrix(), "B") == pytest.approx(q3_pure(psi, "B"),
                                                                          abs=1e-4)


def test_symmetric_mixed_indicator():
    rho = GHZ3.density_matrix()
    assert q3_symmetric_mixed(rho) == pytest.approx(1.0, abs=1e-8)


def test_mixed_indicator_needs_parties_for_four_qubits():
    rho = output_state(0.5, 0.4).density_matrix()
    with pytest.raises(ValueError):
        q3_mixed_indicator(rho)
    with pytest.raises(ValueError):
        q3_mixed_indicator(rho, "c1", ["c1", "r1"])


@pytest.mark.parametrize("kt,alpha", [(0.3, 0.2), (0.8, 0.5), (1.6, 0.8), (4.0, 0.35)])
def test_cavity_three_party_marginal_nonnegative(kt, alpha):
    psi = output_state(kt, alpha)
    rho = partial_trace(psi, ["c1", "c2", "r2"])
    assert q3_mixed_indicator(rho, "c1", ["c1", "c2", "r2"]) >= -1e-9


# --- four qubits

def test_cluster_components():
    ind = q4_components(build_named_state("cluster4"))
    assert len(ind.q4_1x3) == 4 and len(ind.q4_2x2) == 6
    for v in ind.q4_1x3.values():
        assert v == pytest.approx(1.0, abs=1e-6)
    assert set(np.round(list(ind.q4_2x2.values()), 6)) == {1.0, 4.0}


@pytest.mark.parametrize("alpha", [1 / math.sqrt(2), 0.4])
def test_ghz4_components_equal_squared_entropy(alpha):
    ind = q4_components(build_named_state("ghz4", [alpha]))
    s2 = binary_entropy(alpha ** 2) ** 2
    for v in list(ind.q4_1x3.values()) + list(ind.q4_2x2.values()):
        assert v == pytest.approx(s2, abs=1e-6)


def test_product_four_qubit_components_vanish():
    psi = product_all(3)
    ind = q4_components(psi)
    for _, _, v in ind.items():
        assert v == pytest.approx(0.0, abs=1e-8)


def test_ghz4_entanglement_indicator():
    ent = entanglement_indicators(build_named_state("ghz4", [1 / math.sqrt(2)]))
    for v in ent.e4_1x3.values():
        assert v == pytest.approx(1.0, abs=1e-9)


def test_entanglement_indicators_initial_cavity_state():
    ent = entanglement_indicators(output_state(0.0, 0.4),
                                  e3_blocks=[("c1", "c2r2"), ("r1", "c2r2")])
    for key in ("c1|r1c2r2", "r1|c1c2r2"):
        assert ent.e4_1x3[key] == pytest.approx(0.0, abs=1e-9)
    for v in ent.e3_1x2.values():
        assert v == pytest.approx(0.0, abs=1e-9)


def test_explicit_e3_block_that_is_not_a_logic_qubit_raises():
    psi = random_pure_haar(4, 1)
    with pytest.raises(RankError):
        entanglement_indicators(psi, e3_blocks=[("A", "BC")])


def test_cavity_component_keys():
    assert set(CAVITY_COMPONENTS) == {"q4_13", "q4_22", "q3_c1", "q3_r1",
                                      "e4_13", "e4_22", "e3_c1", "e3_r1"}


def test_cavity_components_zero_at_start():
    cache = CorrelationCache(output_state(0.0, 0.5))
    for name, fn in CAVITY_COMPONENTS.items():
        assert fn(cache) == pytest.approx(0.0, abs=1e-9), name


def test_cavity_joint_discord_is_marginal_entropy():
    psi = output_state(0.9, 0.3)
    cache = CorrelationCache(psi)
    assert cache.discord("c1", "r1c2r2") == pytest.approx(
        von_neumann_entropy(partial_trace(psi, "c1")), abs=1e-12)


def test_indicator_set_merge():
    a = IndicatorSet(q4_1x3={"A|BCD": 1.0})
    b = IndicatorSet(q3={"A|BC": 0.5})
    m = a.merged(b)
    assert sorted((n, k) for n, k, _ in m.items()) == [("q3", "A|BC"), ("q4_1x3", "A|BCD")]
