"""Two state backends: dense arrays and stabilizer mixtures.

Dense states are plain numpy arrays (vectors of length 2^m, or density
matrices), with qubit 0 the most significant bit of the basis index, matching
the operator convention in :mod:`stablab.paulis`. Module functions apply
gates, circuits and Pauli operators, and compute entropies and distances.

A :class:`StabilizerMixture` is the uniform mixture over a coset family: r
independent commuting signed Pauli rows on m qubits define

    rho = product_i (I + g_i) / 2  /  2^(m - r),

which is pure exactly when r = m and has entropy m - r bits. Clifford
conjugation, Pauli-projector measurement, marginals and expectations all stay
in the symplectic representation; dense materialization is only for
cross-checks at small m.
"""

from __future__ import annotations

import os

import numpy as np

from . import gf2
from .circuits import Gate, LayeredCircuit, gate_matrix
from .paulis import PauliOperator, commutes, identity, multiply

DEFAULT_DENSE_LIMIT = 12


def dense_qubit_limit() -> int:
    """Qubit cap for dense materialization; STABLAB_DENSE_LIMIT overrides."""
    return int(os.environ.get("STABLAB_DENSE_LIMIT", DEFAULT_DENSE_LIMIT))


_TWO_QUBIT_CLIFFORD_RULES = {
    # name -> sequence of primitive (rule, local positions) conjugation steps
    "CZ": (("H", (1,)), ("CX", (0, 1)), ("H", (1,))),
    "CY": (("SDG", (1,)), ("CX", (0, 1)), ("S", (1,))),
    "SWAP": (("CX", (0, 1)), ("CX", (1, 0)), ("CX", (0, 1))),
}


# --- dense vectors ---


def zero_vector(m: int) -> np.ndarray:
    psi = np.zeros(2**m, dtype=complex)
    psi[0] = 1.0
    return psi


def basis_vector(m: int, bits) -> np.ndarray:
    if isinstance(bits, int):
        index = bits
    else:
        index = 0
        for q, b in enumerate(bits):
            if b:
                index |= 1 << (m - 1 - q)
    psi = np.zeros(2**m, dtype=complex)
    psi[index] = 1.0
    return psi


def _num_qubits(psi: np.ndarray) -> int:
    m = int(psi.shape[0]).bit_length() - 1
    if 2**m != psi.shape[0]:
        raise ValueError(f"length {psi.shape[0]} is not a power of two")
    return m


def apply_gate_vec(psi: np.ndarray, gate: Gate) -> np.ndarray:
    m = _num_qubits(psi)
    mat = gate_matrix(gate)
    k = len(gate.qubits)
    tensor = psi.reshape((2,) * m)
    mat_t = mat.reshape((2,) * (2 * k))
    moved = np.tensordot(mat_t, tensor, axes=(tuple(range(k, 2 * k)), gate.qubits))
    return np.moveaxis(moved, tuple(range(k)), gate.qubits).reshape(-1)


def apply_circuit_vec(psi: np.ndarray, circuit: LayeredCircuit) -> np.ndarray:
    for layer in circuit.layers:
        for gate in layer:
            psi = apply_gate_vec(psi, gate)
    return psi


def _index_masks(p: PauliOperator, m: int) -> tuple[int, int]:
    """Pauli bit q lives at index bit m-1-q (qubit 0 is most significant)."""
    if p.n != m:
        raise ValueError(f"operator on {p.n} qubits against {m}-qubit state")
    x_idx = z_idx = 0
    for q in range(m):
        if (p.x >> q) & 1:
            x_idx |= 1 << (m - 1 - q)
        if (p.z >> q) & 1:
            z_idx |= 1 << (m - 1 - q)
    return x_idx, z_idx


def apply_pauli_vec(psi: np.ndarray, p: PauliOperator) -> np.ndarray:
    m = _num_qubits(psi)
    x_idx, z_idx = _index_masks(p, m)
    indices = np.arange(psi.shape[0], dtype=np.uint64)
    zphase = 1.0 - 2.0 * (np.bitwise_count(indices & np.uint64(z_idx)) & 1)
    out = np.empty_like(psi)
    out[indices ^ np.uint64(x_idx)] = (p.sign * 1j**p.y_count) * zphase * psi
    return out


def pauli_expectation_vec(psi: np.ndarray, p: PauliOperator) -> float:
    value = np.vdot(psi, apply_pauli_vec(psi, p))
    return float(value.real)


def project_pauli_vec(psi: np.ndarray, p: PauliOperator) -> tuple[float, np.ndarray | None]:
    """Apply (I + P)/2; returns (outcome probability, normalized branch)."""
    branch = (psi + apply_pauli_vec(psi, p)) / 2.0
    prob = float(np.vdot(branch, branch).real)
    if prob < 1e-14:
        return 0.0, None
    return prob, branch / np.sqrt(prob)


def rho_from_vector(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def apply_circuit_rho(rho: np.ndarray, circuit: LayeredCircuit) -> np.ndarray:
    """Conjugate a density matrix column by column."""
    m = _num_qubits(rho[:, 0])
    out = rho
    for layer in circuit.layers:
        for gate in layer:
            mat = gate_matrix(gate)
            k = len(gate.qubits)
            tensor = out.reshape((2,) * (2 * m))
            mat_t = mat.reshape((2,) * (2 * k))
            row_axes = gate.qubits
            tensor = np.moveaxis(
                np.tensordot(mat_t, tensor, axes=(tuple(range(k, 2 * k)), row_axes)),
                tuple(range(k)),
                row_axes,
            )
            col_axes = tuple(m + q for q in gate.qubits)
            tensor = np.moveaxis(
                np.tensordot(mat_t.conj(), tensor, axes=(tuple(range(k, 2 * k)), col_axes)),
                tuple(range(k)),
                col_axes,
            )
            out = tensor.reshape(2**m, 2**m)
    return out


def conjugate_pauli_rho(rho: np.ndarray, p: PauliOperator) -> np.ndarray:
    """P rho P (Hermitian P); the i^y and sign factors cancel between sides."""
    m = _num_qubits(rho[:, 0])
    x_idx, z_idx = _index_masks(p, m)
    indices = np.arange(rho.shape[0], dtype=np.uint64)
    # entry [r, c] picks up (-1)^{(r xor c) . z} and both indices shift by x
    parity = np.bitwise_count((indices[:, None] ^ indices[None, :]) & np.uint64(z_idx)) & 1
    shifted = indices ^ np.uint64(x_idx)
    return (1.0 - 2.0 * parity) * rho[np.ix_(shifted, shifted)]


def pauli_expectation_rho(rho: np.ndarray, p: PauliOperator) -> float:
    m = _num_qubits(rho[:, 0])
    x_idx, z_idx = _index_masks(p, m)
    indices = np.arange(rho.shape[0], dtype=np.uint64)
    zphase = 1.0 - 2.0 * (np.bitwise_count(indices & np.uint64(z_idx)) & 1)
    # tr(P rho) = sum_c P[c^x, c] rho[c, c^x] with P[b, c] = phase(c) delta(b, c^x)
    value = (p.sign * 1j**p.y_count) * np.sum(zphase * rho[indices, indices ^ np.uint64(x_idx)])
    return float(value.real)


def partial_trace(rho: np.ndarray, keep, m: int | None = None) -> np.ndarray:
    """Reduced density matrix on the kept qubits, in ascending qubit order."""
    if m is None:
        m = _num_qubits(rho[:, 0])
    keep = sorted(int(q) for q in keep)
    traced = [q for q in range(m) if q not in keep]
    tensor = rho.reshape((2,) * (2 * m))
    cur_m = m
    for q in sorted(traced, reverse=True):
        tensor = np.trace(tensor, axis1=q, axis2=cur_m + q)
        cur_m -= 1
    dim = 2 ** len(keep)
    return tensor.reshape(dim, dim)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in bits; eigenvalues clamped at zero against roundoff."""
    if rho.ndim == 1:
        probs = np.asarray(rho, dtype=float)
    else:
        probs = np.linalg.eigvalsh(rho)
    probs = np.clip(probs.real, 0.0, None)
    mask = probs > 1e-14
    return float(-(probs[mask] * np.log2(probs[mask])).sum())


def _sqrtm_psd(rho: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(rho)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), not squared."""
    root = _sqrtm_psd(rho)
    inner = root @ sigma @ root
    vals = np.linalg.eigvalsh(inner)
    vals = np.clip(vals, 0.0, None)
    return float(np.sqrt(vals).sum())


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    vals = np.linalg.eigvalsh(rho - sigma)
    return float(0.5 * np.abs(vals).sum())


# --- stabilizer mixtures ---


class StabilizerMixture:
    """Uniform mixture defined by independent commuting signed Pauli rows."""

    def __init__(self, m: int, rows: tuple[PauliOperator, ...] = ()):
        self.m = m
        reducer_rows: list[int] = []
        for i, row in enumerate(rows):
            if row.n != m:
                raise ValueError(f"row {i} acts on {row.n} qubits, state has {m}")
            if row.x == 0 and row.z == 0:
                raise ValueError(f"row {i} is a scalar")
            for j in range(i):
                if not commutes(row, rows[j]):
                    raise ValueError(f"rows {j} and {i} anticommute")
        if rows:
            mat = np.zeros((len(rows), 2 * m), dtype=np.uint8)
            for i, row in enumerate(rows):
                for q in range(m):
                    mat[i, q] = (row.x >> q) & 1
                    mat[i, m + q] = (row.z >> q) & 1
            if gf2.rank(mat) != len(rows):
                raise ValueError("rows are dependent")
        self.rows = tuple(rows)

    # r in the class docstring
    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def is_pure(self) -> bool:
        return self.rank == self.m

    @property
    def entropy(self) -> float:
        return float(self.m - self.rank)

    def _bit_matrix(self) -> np.ndarray:
        mat = np.zeros((len(self.rows), 2 * self.m), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            for q in range(self.m):
                mat[i, q] = (row.x >> q) & 1
                mat[i, self.m + q] = (row.z >> q) & 1
        return mat

    def _membership(self, p: PauliOperator) -> int | None:
        """+1 / -1 if +-p is a product of rows (exact sign), else None."""
        target = np.zeros(2 * self.m, dtype=np.uint8)
        for q in range(self.m):
            target[q] = (p.x >> q) & 1
            target[self.m + q] = (p.z >> q) & 1
        if not self.rows:
            return None
        combo = gf2.solve(self._bit_matrix().T, target)
        if combo is None:
            return None
        prod = identity(self.m)
        for i, c in enumerate(combo):
            if c:
                prod = multiply(prod, self.rows[i])
        assert prod.x == p.x and prod.z == p.z
        return prod.sign * p.sign

    def expectation(self, p: PauliOperator) -> float:
        """tr(P rho): +-1 when +-P is in the row group, else exactly 0."""
        if p.x == 0 and p.z == 0:
            return float(p.sign)
        for row in self.rows:
            if not commutes(p, row):
                return 0.0
        sign = self._membership(p)
        return 0.0 if sign is None else float(sign)

    # --- Clifford conjugation ---

    def _conjugated_rows(self, gate: Gate) -> tuple[PauliOperator, ...]:
        steps: list[tuple[str, tuple[int, ...]]]
        if gate.name is not None:
            steps = [(gate.name, tuple(range(len(gate.qubits))))]
        elif gate.word is not None:
            steps = list(gate.word)
        else:
            raise ValueError("dense gates have no tableau action; use the dense backend")
        rows = list(self.rows)
        for name, locs in steps:
            wires = tuple(gate.qubits[p] for p in locs)
            if name in _TWO_QUBIT_CLIFFORD_RULES:
                for sub_name, sub_locs in _TWO_QUBIT_CLIFFORD_RULES[name]:
                    sub_wires = tuple(wires[p] for p in sub_locs)
                    rows = [_conjugate_primitive(r, sub_name, sub_wires) for r in rows]
            else:
                rows = [_conjugate_primitive(r, name, wires) for r in rows]
        return tuple(rows)

    def apply_gate(self, gate: Gate) -> "StabilizerMixture":
        out = StabilizerMixture.__new__(StabilizerMixture)
        out.m = self.m
        out.rows = self._conjugated_rows(gate)
        return out

    def apply_circuit(self, circuit: LayeredCircuit) -> "StabilizerMixture":
        state = self
        for layer in circuit.layers:
            for gate in layer:
                state = state.apply_gate(gate)
        return state

    def conjugate_pauli(self, p: PauliOperator) -> "StabilizerMixture":
        """rho -> P rho P for a Hermitian Pauli P."""
        rows = tuple(
            PauliOperator(r.n, r.x, r.z, -r.sign) if not commutes(r, p) else r for r in self.rows
        )
        out = StabilizerMixture.__new__(StabilizerMixture)
        out.m = self.m
        out.rows = rows
        return out

    # --- measurement ---

    def project_pauli(self, p: PauliOperator) -> tuple[float, "StabilizerMixture | None"]:
        """Measure the +1 outcome of P: probability and post-measurement state."""
        anti = next((j for j, row in enumerate(self.rows) if not commutes(row, p)), None)
        if anti is not None:
            pivot = self.rows[anti]
            new_rows = []
            for j, row in enumerate(self.rows):
                if j == anti:
                    new_rows.append(p)
                elif commutes(row, p):
                    new_rows.append(row)
                else:
                    new_rows.append(multiply(row, pivot))
            out = StabilizerMixture.__new__(StabilizerMixture)
            out.m = self.m
            out.rows = tuple(new_rows)
            return 0.5, out
        sign = self._membership(p)
        if sign is not None:
            return (1.0, self) if sign > 0 else (0.0, None)
        out = StabilizerMixture.__new__(StabilizerMixture)
        out.m = self.m
        out.rows = self.rows + (p,)
        return 0.5, out

    # --- composition and materialization ---

    def extend(self, extra: int) -> "StabilizerMixture":
        """Append `extra` fresh wires in |0>."""
        m_new = self.m + extra
        rows = [PauliOperator(m_new, r.x, r.z, r.sign) for r in self.rows]
        for q in range(self.m, m_new):
            rows.append(PauliOperator(m_new, 0, 1 << q, 1))
        out = StabilizerMixture.__new__(StabilizerMixture)
        out.m = m_new
        out.rows = tuple(rows)
        return out

    def with_rows(self, extra_rows) -> "StabilizerMixture":
        """Re-validate with extra rows appended (rank must grow)."""
        return StabilizerMixture(self.m, self.rows + tuple(extra_rows))

    def _supported_subgroup(self, region: tuple[int, ...]) -> list[PauliOperator]:
        """All row products supported inside the region, exact signs."""
        outside = [q for q in range(self.m) if q not in region]
        if not self.rows:
            return [identity(self.m)]
        mat = np.zeros((len(self.rows), 2 * len(outside)), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            for j, q in enumerate(outside):
                mat[i, j] = (row.x >> q) & 1
                mat[i, len(outside) + j] = (row.z >> q) & 1
        kernel = gf2.kernel_basis(mat.T) if outside else np.eye(len(self.rows), dtype=np.uint8)
        members = []
        for coeff_bits in range(1 << kernel.shape[0]):
            prod = identity(self.m)
            for i in range(kernel.shape[0]):
                if (coeff_bits >> i) & 1:
                    for j, c in enumerate(kernel[i]):
                        if c:
                            prod = multiply(prod, self.rows[j])
            members.append(prod)
        return members

    def marginal(self, region) -> np.ndarray:
        """Dense reduced density matrix on the region (ascending order)."""
        region = tuple(sorted(int(q) for q in region))
        if len(region) > 12:
            raise ValueError("marginal materialization capped at 12 qubits")
        from .paulis import dense_matrix

        dim = 2 ** len(region)
        rho = np.zeros((dim, dim), dtype=complex)
        for member in self._supported_subgroup(region):
            restricted = _restrict_pauli(member, region)
            rho += restricted.sign * dense_matrix(PauliOperator(restricted.n, restricted.x, restricted.z, 1))
        return rho / dim

    def dense_rho(self) -> np.ndarray:
        return self.marginal(range(self.m))

    def dense_vector(self, rng: np.random.Generator | None = None) -> np.ndarray:
        """Materialize the pure state by projecting a generic probe vector."""
        if not self.is_pure:
            raise ValueError("mixture is not pure")
        if self.m > 14:
            raise ValueError("dense materialization capped at 14 qubits")
        if rng is None:
            rng = np.random.default_rng(0)
        for _ in range(8):
            probe = rng.standard_normal(2**self.m) + 1j * rng.standard_normal(2**self.m)
            for row in self.rows:
                probe = (probe + apply_pauli_vec(probe, row)) / 2.0
            norm = float(np.linalg.norm(probe))
            if norm > 1e-9:
                psi = probe / norm
                # fix global phase: largest-magnitude amplitude made real positive
                pivot = int(np.argmax(np.abs(psi)))
                return psi * (abs(psi[pivot]) / psi[pivot])
        raise RuntimeError("probe vectors kept annihilating; state inconsistent")


def _restrict_pauli(p: PauliOperator, region: tuple[int, ...]) -> PauliOperator:
    """Drop identity factors outside the region (support must lie inside)."""
    x = z = 0
    for new_q, q in enumerate(region):
        x |= ((p.x >> q) & 1) << new_q
        z |= ((p.z >> q) & 1) << new_q
    support = p.support
    if any(q not in region for q in support):
        raise ValueError("operator not supported in region")
    return PauliOperator(len(region), x, z, p.sign)


def _conjugate_primitive(row: PauliOperator, name: str, wires: tuple[int, ...]) -> PauliOperator:
    """U row U^dagger for one elementary Clifford, on the Hermitian rep."""
    x, z, sign = row.x, row.z, row.sign
    if name in ("H", "S", "SDG", "X", "Y", "Z"):
        q = wires[0]
        xb, zb = (x >> q) & 1, (z >> q) & 1
        if name == "H":
            if xb and zb:
                sign = -sign
            x = (x & ~(1 << q)) | (zb << q)
            z = (z & ~(1 << q)) | (xb << q)
        elif name == "S":
            if xb and zb:
                sign = -sign
            z ^= xb << q
        elif name == "SDG":
            if xb and not zb:
                sign = -sign
            z ^= xb << q
        elif name == "X":
            if zb:
                sign = -sign
        elif name == "Y":
            if xb ^ zb:
                sign = -sign
        elif name == "Z":
            if xb:
                sign = -sign
        return PauliOperator(row.n, x, z, sign)
    if name == "CX":
        a, b = wires
        xa, za = (x >> a) & 1, (z >> a) & 1
        xb_, zb_ = (x >> b) & 1, (z >> b) & 1
        if xa and zb_ and (xb_ ^ za ^ 1):
            sign = -sign
        x ^= xa << b
        z ^= zb_ << a
        return PauliOperator(row.n, x, z, sign)
    raise ValueError(f"no tableau rule for {name!r}")


def zero_mixture(m: int) -> StabilizerMixture:
    return StabilizerMixture(m, tuple(PauliOperator(m, 0, 1 << q, 1) for q in range(m)))


def group_mixture(group) -> StabilizerMixture:
    """Maximally mixed code state: independent generators become the rows."""
    from .paulis import _IntRowReducer

    reducer = _IntRowReducer()
    rows = []
    for g in group.generators:
        if reducer.add(g.x | (g.z << group.n)):
            rows.append(g)
    return StabilizerMixture(group.n, tuple(rows))
