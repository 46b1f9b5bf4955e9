"""The logical depolarizing channel, encoded mixed states, entropy audits.

The channel averages over all 4^k logical Pauli frames,

    E(rho) = 4^-k sum_{a,b} (Xbar^a Zbar^b) rho (Zbar^b Xbar^a),

which wipes out every logical degree of freedom while acting trivially on
syndrome information and on any region smaller than the distance. Dense
states get the literal conjugation sum; stabilizer mixtures get the exact
algebraic answer: expanding the mixture over its 2^r signed members, the
channel kills every member that anticommutes with some logical and keeps the
rest, so E(rho) is the uniform mixture over the commutant subgroup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import gf2
from .codes import Code, code_parameters
from .paulis import (
    LogicalPair,
    PauliOperator,
    StabilizerGroup,
    commutes,
    embed_pauli,
    identity,
    logical_pairs,
    multiply,
    single,
)
from .states import (
    StabilizerMixture,
    apply_circuit_rho,
    apply_pauli_vec,
    basis_vector,
    conjugate_pauli_rho,
    dense_qubit_limit,
    group_mixture,
    partial_trace,
    pauli_expectation_vec,
    project_pauli_vec,
    rho_from_vector,
)
from .states import von_neumann_entropy as _entropy_of_eigs
from .circuits import LayeredCircuit, reverse_circuit
from .syndrome import decohere


@dataclass(frozen=True)
class LogicalDepolarizer:
    """4^k Kraus terms Xbar^a Zbar^b over the code's logical pairs."""

    pairs: tuple[LogicalPair, ...]
    n: int

    @property
    def k(self) -> int:
        return len(self.pairs)

    def logicals(self, m: int | None = None) -> tuple[PauliOperator, ...]:
        """Xbar_1..Xbar_k, Zbar_1..Zbar_k, embedded on the first n of m wires."""
        ops = [p.xbar for p in self.pairs] + [p.zbar for p in self.pairs]
        if m is None or m == self.n:
            return tuple(ops)
        if m < self.n:
            raise ValueError("state has fewer qubits than the code")
        return tuple(embed_pauli(p, m, tuple(range(self.n))) for p in ops)


def logical_depolarizer(code: Code | StabilizerGroup, pairs=None) -> LogicalDepolarizer:
    group = code.group if isinstance(code, Code) else code
    if pairs is None:
        pairs = logical_pairs(group)
    return LogicalDepolarizer(pairs=tuple(pairs), n=group.n)


def _as_channel(pairs, n: int) -> LogicalDepolarizer:
    if isinstance(pairs, LogicalDepolarizer):
        return pairs
    pairs = tuple(pairs)
    return LogicalDepolarizer(pairs=pairs, n=pairs[0].xbar.n if pairs else n)


def logical_depolarize(state, pairs):
    """Apply the channel; mixtures stay mixtures, dense input returns a matrix.

    States wider than the code are fine: the logicals act on the first n
    wires and the rest ride along (the channel tensored with identity).
    """
    if isinstance(state, StabilizerMixture):
        chan = _as_channel(pairs, state.m)
        logicals = chan.logicals(state.m)
        rows = state.rows
        if not rows or not logicals:
            return state
        mat = np.zeros((len(rows), len(logicals)), dtype=np.uint8)
        for i, r in enumerate(rows):
            for j, l in enumerate(logicals):
                mat[i, j] = 0 if commutes(r, l) else 1
        kernel = gf2.kernel_basis(mat.T)
        survivors = []
        for coeffs in kernel:
            prod = identity(state.m)
            for j, c in enumerate(coeffs):
                if c:
                    prod = multiply(prod, rows[j])  # rows commute: sign exact
            survivors.append(prod)
        return StabilizerMixture(state.m, tuple(survivors))

    rho = np.asarray(state, dtype=complex)
    if rho.ndim == 1:
        rho = rho_from_vector(rho)
    m = rho.shape[0].bit_length() - 1
    if m > dense_qubit_limit():
        raise ValueError(f"dense limit exceeded: {m} qubits > {dense_qubit_limit()}")
    chan = _as_channel(pairs, m)
    if chan.k == 0:
        return rho
    xbars = chan.logicals(m)[: chan.k]
    zbars = chan.logicals(m)[chan.k :]
    out = np.zeros_like(rho)
    for a in itertools.product((0, 1), repeat=chan.k):
        for b in itertools.product((0, 1), repeat=chan.k):
            sigma = rho
            # conjugation by Xbar^a Zbar^b, innermost factor first; the
            # ordering inside the product is a global phase and cancels
            for i, bit in enumerate(b):
                if bit:
                    sigma = conjugate_pauli_rho(sigma, zbars[i])
            for i, bit in enumerate(a):
                if bit:
                    sigma = conjugate_pauli_rho(sigma, xbars[i])
            out += sigma
    return out / 4**chan.k


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in bits, after checking the input is an actual state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if not np.allclose(rho, rho.conj().T, atol=1e-8):
        raise ValueError("density matrix is not Hermitian")
    trace = float(np.trace(rho).real)
    if abs(trace - 1.0) > 1e-8:
        raise ValueError(f"density matrix trace {trace!r} is not 1")
    vals = np.linalg.eigvalsh(rho)
    if float(vals.min()) < -1e-10:
        raise ValueError(f"density matrix has negative eigenvalue {float(vals.min())!r}")
    return _entropy_of_eigs(np.clip(vals, 0.0, None))


def stabilizer_entropy(state: StabilizerMixture) -> int:
    """Exact entropy in bits: qubits minus independent constraints."""
    if not isinstance(state, StabilizerMixture):
        raise TypeError("stabilizer mixture required")
    return state.m - state.rank


def _state_entropy(mu) -> float:
    if isinstance(mu, StabilizerMixture):
        return float(stabilizer_entropy(mu))
    return _entropy_of_eigs(np.linalg.eigvalsh(np.asarray(mu)))


def _state_marginal(state, region) -> np.ndarray:
    region = tuple(sorted(region))
    if isinstance(state, StabilizerMixture):
        return state.marginal(region)
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        arr = rho_from_vector(arr)
    return partial_trace(arr, region)


@dataclass(frozen=True)
class EncodedMixedState:
    """Theta = sum_s p_s mu_s (x) |s><s| with mu_s the depolarized branches."""

    n: int
    k: int
    branches: tuple[tuple[tuple[int, ...], float, object], ...]

    @property
    def n_checks(self) -> int:
        return len(self.branches[0][0]) if self.branches else 0

    @property
    def mixing_entropy(self) -> float:
        probs = np.array([p for _, p, _ in self.branches])
        probs = probs[probs > 1e-14]
        return float(-(probs * np.log2(probs)).sum())

    @property
    def total_entropy(self) -> float:
        """S(Theta) = H({p_s}) + sum_s p_s S(mu_s), exact branchwise."""
        return self.mixing_entropy + sum(p * _state_entropy(mu) for _, p, mu in self.branches)

    def dense_theta(self) -> np.ndarray:
        m_total = self.n + self.n_checks
        if m_total > dense_qubit_limit():
            raise ValueError(f"dense limit exceeded: {m_total} qubits > {dense_qubit_limit()}")
        dim = 2**m_total
        out = np.zeros((dim, dim), dtype=complex)
        for bits, p, mu in self.branches:
            block = mu.dense_rho() if isinstance(mu, StabilizerMixture) else np.asarray(mu)
            packed = 0
            for i, b in enumerate(bits):
                packed |= b << (self.n_checks - 1 - i)
            step = 2**self.n_checks
            out[packed::step, packed::step] += p * block
        return out


def encoded_state(phi, group: StabilizerGroup, pairs=None) -> EncodedMixedState:
    """Decohere into syndrome branches, then depolarize each branch."""
    chan = logical_depolarizer(group, pairs)
    dec = decohere(phi, group)
    branches = []
    for bits, p, branch in dec.branches:
        mu = logical_depolarize(branch, chan)
        branches.append((bits, p, mu))
    return EncodedMixedState(n=group.n, k=chan.k, branches=tuple(branches))


def _register_rows(mu: StabilizerMixture, bits, n: int, n_checks: int) -> StabilizerMixture:
    m_total = n + n_checks
    rows = [PauliOperator(m_total, r.x, r.z, r.sign) for r in mu.rows]
    for i, b in enumerate(bits):
        rows.append(PauliOperator(m_total, 0, 1 << (n + i), -1 if b else 1))
    return StabilizerMixture(m_total, tuple(rows))


def entropy_audit(theta: EncodedMixedState, w: LayeredCircuit) -> dict:
    """k <= S(Theta) <= sum_j S(single-qubit marginals of W^dag Theta W).

    The rate bound holds branchwise by the channel's entropy floor; the
    second step is subadditivity after the (entropy-preserving) rotation.
    Both are asserted, all three numbers reported.
    """
    m_total = theta.n + theta.n_checks
    if w.m != m_total:
        raise ValueError(f"circuit acts on {w.m} wires, state has {m_total}")
    wdag = reverse_circuit(w)
    clifford = all(g.is_clifford_representable for layer in w.layers for g in layer)

    marginals = [np.zeros((2, 2), dtype=complex) for _ in range(m_total)]
    for bits, p, mu in theta.branches:
        if isinstance(mu, StabilizerMixture) and clifford:
            rotated = _register_rows(mu, bits, theta.n, theta.n_checks).apply_circuit(wdag)
            for j in range(m_total):
                marginals[j] += p * rotated.marginal((j,))
        else:
            if m_total > dense_qubit_limit():
                raise ValueError(f"dense limit exceeded: {m_total} qubits > {dense_qubit_limit()}")
            block = mu.dense_rho() if isinstance(mu, StabilizerMixture) else np.asarray(mu)
            packed = 0
            for i, b in enumerate(bits):
                packed |= b << (theta.n_checks - 1 - i)
            reg = np.zeros(2**theta.n_checks, dtype=complex)
            reg[packed] = 1.0
            sigma = np.kron(block, rho_from_vector(reg))
            rotated = apply_circuit_rho(sigma, wdag)
            for j in range(m_total):
                marginals[j] += p * partial_trace(rotated, (j,), m_total)

    total = theta.total_entropy
    per_qubit_sum = float(sum(_entropy_of_eigs(np.linalg.eigvalsh(mj)) for mj in marginals))
    assert theta.k <= total + 1e-9
    assert total <= per_qubit_sum + 1e-9
    return {"k": theta.k, "S_Theta": total, "per_qubit_sum": per_qubit_sum}


# --- invariance and zero-expectation suites ---


def _logical_basis_family(group: StabilizerGroup, pairs) -> list[StabilizerMixture]:
    """The 2^k Zbar-basis states plus the 2^k Xbar-basis states."""
    base = group_mixture(group)
    family = []
    for which in ("zbar", "xbar"):
        for signs in itertools.product((1, -1), repeat=len(pairs)):
            rows = [
                PauliOperator(group.n, l.x, l.z, s * l.sign)
                for s, l in zip(signs, [getattr(p, which) for p in pairs])
            ]
            family.append(base.with_rows(rows))
    return family


def _nonzero_syndrome_error(group: StabilizerGroup) -> PauliOperator | None:
    for q in range(group.n):
        for letter in ("X", "Z", "Y"):
            err = single(group.n, q, letter)
            if any(group.syndrome_of(err)):
                return err
    return None


def _conjugated(state, p: PauliOperator):
    if isinstance(state, StabilizerMixture):
        return state.conjugate_pauli(p)
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        arr = rho_from_vector(arr)
    return conjugate_pauli_rho(arr, p)


def marginal_invariance_suite(code, family=None, region=(), distance=None) -> dict:
    """Distance-protected regions carry no information: three checks at 1e-10.

    (a) every code state has the same marginal on the region;
    (b) conjugating any syndrome-sector state by a logical leaves its
        marginal untouched;
    (c) the depolarizing channel leaves marginals on the region untouched.
    """
    group = code.group if isinstance(code, Code) else code
    region = tuple(sorted(int(q) for q in region))
    if distance is None:
        distance = code_parameters(group).d
    if distance is None:
        raise ValueError("distance unknown; pass distance explicitly")
    if len(region) >= distance:
        raise ValueError(f"region size {len(region)} not below distance {distance}")

    pairs = logical_pairs(group)
    chan = LogicalDepolarizer(pairs=pairs, n=group.n)
    if family is None:
        family = _logical_basis_family(group, pairs)
    family = list(family)

    marginals = [_state_marginal(s, region) for s in family]
    dev_a = max(
        (float(np.abs(mi - marginals[0]).max()) for mi in marginals[1:]), default=0.0
    )

    sector_states = list(family)
    err = _nonzero_syndrome_error(group)
    if err is not None:
        sector_states.append(_conjugated(family[0], err))
    dev_b = 0.0
    dev_c = 0.0
    for state in sector_states:
        base = _state_marginal(state, region)
        for logical in chan.logicals():
            moved = _state_marginal(_conjugated(state, logical), region)
            dev_b = max(dev_b, float(np.abs(moved - base).max()))
        pushed = _state_marginal(logical_depolarize(state, chan), region)
        dev_c = max(dev_c, float(np.abs(pushed - base).max()))

    tol = 1e-10
    report = {
        "region": list(region),
        "distance": int(distance),
        "n_states": len(family),
        "code_states_share_marginal": dev_a <= tol,
        "logical_conjugation_invariant": dev_b <= tol,
        "channel_preserves_marginal": dev_c <= tol,
        "max_deviation": max(dev_a, dev_b, dev_c),
    }
    report["passed"] = bool(
        report["code_states_share_marginal"]
        and report["logical_conjugation_invariant"]
        and report["channel_preserves_marginal"]
    )
    return report


def _sector_state(group: StabilizerGroup, sector, rng: np.random.Generator) -> np.ndarray:
    """Random pure state in D_s, by projecting a generic dense vector."""
    n = group.n
    for _ in range(8):
        vec = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        vec /= np.linalg.norm(vec)
        dead = False
        for bit, g in zip(sector, group.generators):
            signed = PauliOperator(g.n, g.x, g.z, (-1 if bit else 1) * g.sign)
            prob, vec = project_pauli_vec(vec, signed)
            if vec is None:
                dead = True
                break
        if not dead:
            return vec
    raise ValueError("syndrome sector is empty (inconsistent with dependent checks)")


def zero_expectation_suite(code, sector, n_samples: int = 5, seed: int = 0, max_paulis: int = 4096) -> dict:
    """Anticommuting Paulis average to zero on any syndrome sector.

    For random states in D_s: every Pauli that anticommutes with some check
    has expectation 0 (to 1e-10), and conjugation by logicals keeps every
    check expectation at (-1)^{s_i}.
    """
    group = code.group if isinstance(code, Code) else code
    n = group.n
    sector = tuple(int(b) & 1 for b in sector)
    if len(sector) != len(group.generators):
        raise ValueError("sector length does not match check count")
    rng = np.random.default_rng(seed)

    if 4**n <= max_paulis:
        paulis = [
            PauliOperator(n, x, z)
            for x in range(2**n)
            for z in range(2**n)
            if (x, z) != (0, 0)
        ]
    else:
        paulis = [
            PauliOperator(n, int(rng.integers(0, 2**n)), int(rng.integers(0, 2**n)))
            for _ in range(max_paulis)
        ]
    anticommuting = [p for p in paulis if any(group.syndrome_of(p))]

    chan = logical_depolarizer(group)
    max_abs = 0.0
    max_syndrome_dev = 0.0
    for _ in range(n_samples):
        state = _sector_state(group, sector, rng)
        for p in anticommuting:
            max_abs = max(max_abs, abs(pauli_expectation_vec(state, p)))
        for logical in chan.logicals():
            moved = apply_pauli_vec(state, logical)
            for bit, g in zip(sector, group.generators):
                want = (-1.0) ** bit
                max_syndrome_dev = max(
                    max_syndrome_dev, abs(pauli_expectation_vec(moved, g) - want)
                )

    report = {
        "sector": "".join(str(b) for b in sector),
        "n_samples": n_samples,
        "n_paulis_checked": len(anticommuting),
        "max_abs_expectation": max_abs,
        "max_syndrome_deviation": max_syndrome_dev,
        "passed": max_abs <= 1e-10 and max_syndrome_dev <= 1e-10,
    }
    return report


def extended_invariance_check(code, region1, region2, seed: int = 0, distance=None) -> dict:
    """Purified code state vs its logically-depolarized image on R1 u R2.

    R1 sits in the code block (|R1| < d), R2 in the k entangled reference
    qubits appended after it; the marginals must agree to 1e-10.
    """
    group = code.group if isinstance(code, Code) else code
    pairs = logical_pairs(group)
    k = len(pairs)
    n = group.n
    if distance is None:
        distance = code_parameters(group).d
    if distance is None:
        raise ValueError("distance unknown; pass distance explicitly")
    region1 = tuple(sorted(int(q) for q in region1))
    region2 = tuple(sorted(int(q) for q in region2))
    if len(region1) >= distance:
        raise ValueError(f"code region size {len(region1)} not below distance {distance}")
    if any(not 0 <= q < n for q in region1):
        raise ValueError("region1 must sit in the code block")
    if any(not n <= q < n + k for q in region2):
        raise ValueError("region2 must sit in the reference block")
    if n + k > dense_qubit_limit():
        raise ValueError(f"dense limit exceeded: {n + k} qubits > {dense_qubit_limit()}")

    rng = np.random.default_rng(seed)
    coeffs = rng.normal(size=2**k) + 1j * rng.normal(size=2**k)
    coeffs /= np.linalg.norm(coeffs)
    base = group_mixture(group)
    psi = np.zeros(2 ** (n + k), dtype=complex)
    for x in range(2**k):
        rows = [
            PauliOperator(n, p.zbar.x, p.zbar.z, (-1 if (x >> (k - 1 - i)) & 1 else 1) * p.zbar.sign)
            for i, p in enumerate(pairs)
        ]
        codeword = base.with_rows(rows).dense_vector()
        psi += coeffs[x] * np.kron(codeword, basis_vector(k, x))

    rho = rho_from_vector(psi)
    chan = LogicalDepolarizer(pairs=pairs, n=n)
    theta = logical_depolarize(rho, chan)
    region = region1 + region2
    dev = float(np.abs(partial_trace(rho, region) - partial_trace(theta, region)).max())
    return {
        "region1": list(region1),
        "region2": list(region2),
        "deviation": dev,
        "passed": dev <= 1e-10,
    }
