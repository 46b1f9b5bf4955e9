import numpy as np
import pytest

from stablab.channels import (
    LogicalDepolarizer,
    encoded_state,
    entropy_audit,
    extended_invariance_check,
    logical_depolarize,
    logical_depolarizer,
    marginal_invariance_suite,
    stabilizer_entropy,
    von_neumann_entropy,
    zero_expectation_suite,
)
from stablab.circuits import identity_circuit, random_low_depth
from stablab.codes import five_qubit_code, toric_code
from stablab.paulis import PauliOperator, StabilizerGroup, from_letters, logical_pairs, single
from stablab.states import group_mixture, partial_trace, rho_from_vector, zero_mixture
from oracles import pauli_matrix, von_neumann_entropy_naive


def random_rho(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_vec(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


def channel_oracle(rho, pairs):
    """Literal 4^k-term conjugation sum from dense Pauli matrices."""
    k = len(pairs)
    n = pairs[0].xbar.n
    out = np.zeros_like(rho)
    for a in range(2**k):
        for b in range(2**k):
            kraus = np.eye(2**n, dtype=complex)
            for i in range(k):
                if (a >> i) & 1:
                    p = pairs[i].xbar
                    kraus = kraus @ (p.sign * pauli_matrix(p.letters()))
            for i in range(k):
                if (b >> i) & 1:
                    p = pairs[i].zbar
                    kraus = kraus @ (p.sign * pauli_matrix(p.letters()))
            out += kraus @ rho @ kraus.conj().T
    return out / 4**k


def test_dense_channel_matches_kraus_oracle():
    code = five_qubit_code()
    chan = logical_depolarizer(code)
    for seed in range(3):
        rho = random_rho(5, seed)
        got = logical_depolarize(rho, chan)
        want = channel_oracle(rho, chan.pairs)
        assert np.allclose(got, want, atol=1e-12)


def test_channel_trace_preserving_and_unital():
    code = five_qubit_code()
    chan = logical_depolarizer(code)
    rho = random_rho(5, 7)
    out = logical_depolarize(rho, chan)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
    eye = np.eye(32, dtype=complex) / 32
    assert np.allclose(logical_depolarize(eye, chan), eye, atol=1e-12)


def test_channel_idempotent():
    code = five_qubit_code()
    chan = logical_depolarizer(code)
    rho = random_rho(5, 3)
    once = logical_depolarize(rho, chan)
    twice = logical_depolarize(once, chan)
    assert np.allclose(once, twice, atol=1e-12)


def test_k_zero_channel_is_identity():
    group = StabilizerGroup([from_letters("Z")])
    chan = logical_depolarizer(group)
    assert chan.k == 0
    rho = random_rho(1, 1)
    assert logical_depolarize(rho, chan) is rho
    mix = zero_mixture(1)
    assert logical_depolarize(mix, chan) is mix


def test_five_qubit_code_state_entropy_one():
    code = five_qubit_code()
    chan = logical_depolarizer(code)
    mix = group_mixture(code.group)
    out = logical_depolarize(mix, chan)
    assert stabilizer_entropy(out) == 1
    dense = logical_depolarize(mix.dense_rho(), chan)
    assert von_neumann_entropy_naive(dense) == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(out.dense_rho(), dense, atol=1e-12)


def test_toric_code_state_entropy_two():
    code = toric_code(2)
    chan = logical_depolarizer(code)
    assert chan.k == 2
    out = logical_depolarize(group_mixture(code.group), chan)
    assert stabilizer_entropy(out) == 2
    dense = logical_depolarize(group_mixture(code.group).dense_rho(), chan)
    assert von_neumann_entropy_naive(dense) == pytest.approx(2.0, abs=1e-10)


def test_mixture_channel_matches_dense_on_generic_states():
    code = five_qubit_code()
    chan = logical_depolarizer(code)
    for seed in range(6):
        circ = random_low_depth(5, depth=3, family="clifford", seed=seed)
        st = zero_mixture(5).apply_circuit(circ)
        via_mixture = logical_depolarize(st, chan).dense_rho()
        via_dense = logical_depolarize(st.dense_rho(), chan)
        assert np.allclose(via_mixture, via_dense, atol=1e-10)


def test_channel_entropy_floor():
    """S(E(rho)) >= k, equality exactly on pure code states."""
    code = five_qubit_code()
    chan = logical_depolarizer(code)
    group = code.group
    for seed in range(10):
        rho = random_rho(5, 40 + seed)
        out = logical_depolarize(rho, chan)
        assert von_neumann_entropy_naive(out) >= chan.k - 1e-9
    # pure code state: project a random vector into the zero sector
    from stablab.states import project_pauli_vec

    vec = random_vec(5, 5)
    for g in group.generators:
        _, vec = project_pauli_vec(vec, g)
    out = logical_depolarize(rho_from_vector(vec), chan)
    assert von_neumann_entropy_naive(out) == pytest.approx(1.0, abs=1e-9)


def test_vector_input_returns_density_matrix():
    code = five_qubit_code()
    chan = logical_depolarizer(code)
    vec = random_vec(5, 2)
    out = logical_depolarize(vec, chan)
    assert out.shape == (32, 32)
    assert np.allclose(out, logical_depolarize(rho_from_vector(vec), chan), atol=1e-12)


def test_von_neumann_entropy_values_and_validation():
    assert von_neumann_entropy(np.diag([1.0, 0.0]).astype(complex)) == pytest.approx(0.0)
    assert von_neumann_entropy(np.eye(2, dtype=complex) / 2) == pytest.approx(1.0)
    h2_quarter = 0.25 * 2 + 0.75 * np.log2(4 / 3)
    assert von_neumann_entropy(np.diag([0.75, 0.25]).astype(complex)) == pytest.approx(
        h2_quarter, abs=1e-12
    )
    assert h2_quarter == pytest.approx(0.8112781, abs=1e-7)
    with pytest.raises(ValueError, match="trace"):
        von_neumann_entropy(np.eye(2, dtype=complex))
    with pytest.raises(ValueError, match="Hermitian"):
        von_neumann_entropy(np.array([[0.5, 1.0], [0.0, 0.5]], dtype=complex))
    with pytest.raises(ValueError, match="negative"):
        von_neumann_entropy(np.diag([1.5, -0.5]).astype(complex))
    with pytest.raises(ValueError, match="square"):
        von_neumann_entropy(np.ones(4, dtype=complex))


def test_stabilizer_entropy_basics():
    assert stabilizer_entropy(zero_mixture(3)) == 0
    assert stabilizer_entropy(group_mixture(five_qubit_code().group)) == 1
    with pytest.raises(TypeError, match="stabilizer"):
        stabilizer_entropy(np.eye(2) / 2)


def test_marginal_invariance_five_qubit():
    report = marginal_invariance_suite(five_qubit_code(), region=(1, 3))
    assert report["passed"]
    assert report["code_states_share_marginal"]
    assert report["logical_conjugation_invariant"]
    assert report["channel_preserves_marginal"]
    assert report["max_deviation"] <= 1e-10
    assert report["n_states"] == 4  # both logical bases for k = 1


def test_marginal_invariance_toric():
    report = marginal_invariance_suite(toric_code(2), region=(4,))
    assert report["passed"]


def test_marginal_invariance_region_too_large():
    with pytest.raises(ValueError, match="not below distance"):
        marginal_invariance_suite(five_qubit_code(), region=(0, 1, 2))


def test_weight_three_logical_support_distinguishes():
    """Negative control: at |T| = d the shared-marginal property breaks."""
    code = five_qubit_code()
    pairs = logical_pairs(code.group)
    xbar = pairs[0].xbar
    assert xbar.weight == 3
    region = xbar.support
    base = group_mixture(code.group)
    plus = base.with_rows([xbar])
    minus = base.with_rows([PauliOperator(xbar.n, xbar.x, xbar.z, -xbar.sign)])
    dev = np.abs(plus.marginal(region) - minus.marginal(region)).max()
    assert dev > 0.1


def test_zero_expectation_suite_sectors():
    code = five_qubit_code()
    clean = zero_expectation_suite(code, (0, 0, 0, 0), n_samples=3, seed=1)
    assert clean["passed"]
    assert clean["n_paulis_checked"] == 960  # 4^5 - 1 minus the 63 centralizer elements
    shifted = zero_expectation_suite(code, (1, 0, 0, 1), n_samples=3, seed=2)
    assert shifted["passed"]
    assert shifted["sector"] == "1001"


def test_zero_expectation_explicit_anticommuting_pauli():
    code = five_qubit_code()
    group = code.group
    mix = group_mixture(group)
    err = single(5, 0, "X")
    assert any(group.syndrome_of(err))
    assert mix.expectation(err) == 0.0


def test_zero_expectation_sector_validation():
    with pytest.raises(ValueError, match="sector length"):
        zero_expectation_suite(five_qubit_code(), (0, 1), n_samples=1)


def test_extended_invariance_purified_code_state():
    code = five_qubit_code()
    for seed in range(4):
        report = extended_invariance_check(code, region1=(0, 4), region2=(5,), seed=seed)
        assert report["passed"], report
    report = extended_invariance_check(code, region1=(2,), region2=(), seed=0)
    assert report["passed"]


def test_extended_invariance_validation():
    code = five_qubit_code()
    with pytest.raises(ValueError, match="not below distance"):
        extended_invariance_check(code, region1=(0, 1, 2), region2=(5,))
    with pytest.raises(ValueError, match="reference block"):
        extended_invariance_check(code, region1=(0,), region2=(4,))


def test_encoded_state_code_input():
    code = five_qubit_code()
    theta = encoded_state(group_mixture(code.group), code.group)
    assert theta.k == 1
    assert theta.n_checks == 4
    assert len(theta.branches) == 1
    bits, p, mu = theta.branches[0]
    assert bits == (0, 0, 0, 0)
    assert p == pytest.approx(1.0)
    assert stabilizer_entropy(mu) == 1
    assert theta.mixing_entropy == pytest.approx(0.0)
    assert theta.total_entropy == pytest.approx(1.0)


def test_encoded_state_dense_branches_sum():
    code = five_qubit_code()
    phi = random_vec(5, 9)
    theta = encoded_state(phi, code.group)
    probs = [p for _, p, _ in theta.branches]
    assert sum(probs) == pytest.approx(1.0, abs=1e-12)
    dense = theta.dense_theta()
    assert np.trace(dense).real == pytest.approx(1.0, abs=1e-10)
    # branchwise entropy formula matches the eigenvalue entropy of Theta
    assert von_neumann_entropy_naive(dense) == pytest.approx(theta.total_entropy, abs=1e-8)


def test_entropy_audit_code_state_rate_tight():
    code = five_qubit_code()
    theta = encoded_state(group_mixture(code.group), code.group)
    report = entropy_audit(theta, identity_circuit(9))
    assert report["k"] == 1
    assert report["S_Theta"] == pytest.approx(1.0)
    assert report["S_Theta"] <= report["per_qubit_sum"] + 1e-9


def test_entropy_audit_product_theta_tight():
    """A product Theta makes subadditivity an equality."""
    group = StabilizerGroup([from_letters("ZI")])
    theta = encoded_state(zero_mixture(2), group)
    report = entropy_audit(theta, identity_circuit(3))
    assert report["k"] == 1
    assert report["S_Theta"] == pytest.approx(1.0)
    assert report["per_qubit_sum"] == pytest.approx(report["S_Theta"], abs=1e-9)


def test_entropy_audit_dense_branches():
    code = five_qubit_code()
    phi = random_vec(5, 13)
    theta = encoded_state(phi, code.group)
    w = random_low_depth(9, depth=1, family="clifford", seed=4)
    report = entropy_audit(theta, w)
    assert report["k"] <= report["S_Theta"] + 1e-9
    assert report["S_Theta"] <= report["per_qubit_sum"] + 1e-9
    assert set(report) == {"k", "S_Theta", "per_qubit_sum"}


def test_entropy_audit_clifford_branch_matches_dense():
    """Same Theta pushed through both backends gives the same numbers."""
    code = five_qubit_code()
    group = code.group
    mix = group_mixture(group).conjugate_pauli(single(5, 2, "X"))
    theta_mix = encoded_state(mix, group)
    w = random_low_depth(9, depth=2, family="clifford", seed=11)
    report = entropy_audit(theta_mix, w)
    assert report["S_Theta"] == pytest.approx(1.0)  # error shifts sector, not entropy

    # dense route on a pure code state gives identical numbers
    zbar = logical_pairs(group)[0].zbar
    pure_mix = group_mixture(group).with_rows([zbar])
    theta_a = encoded_state(pure_mix.dense_vector(), group)
    theta_b = encoded_state(pure_mix, group)
    ra = entropy_audit(theta_a, w)
    rb = entropy_audit(theta_b, w)
    assert ra["S_Theta"] == pytest.approx(rb["S_Theta"], abs=1e-8)
    assert ra["per_qubit_sum"] == pytest.approx(rb["per_qubit_sum"], abs=1e-8)


def test_entropy_audit_wire_mismatch():
    code = five_qubit_code()
    theta = encoded_state(group_mixture(code.group), code.group)
    with pytest.raises(ValueError, match="wires"):
        entropy_audit(theta, identity_circuit(5))
