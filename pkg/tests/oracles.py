"""Independent brute-force oracles used by the test suite.

Everything here is written to be obviously correct rather than fast, and
deliberately avoids the package's own kernels: GF(2) elimination works on
Python int lists, Pauli matrices are built by literal np.kron chains, and
circuits are simulated by materializing full unitaries. Tests compare the
package's optimized paths against these.
"""

from __future__ import annotations

import numpy as np

I2 = np.eye(2, dtype=complex)
PAULI_MATS = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(letters: str, sign: int = 1) -> np.ndarray:
    """Dense matrix of a Pauli string, qubit 0 leftmost in the kron chain."""
    mat = np.array([[sign]], dtype=complex)
    for ch in letters:
        mat = np.kron(mat, PAULI_MATS[ch])
    return mat


def gf2_rank_naive(rows: list[list[int]]) -> int:
    """Gaussian elimination over GF(2) on plain int lists."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    n_cols = len(rows[0])
    rank = 0
    for col in range(n_cols):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col] % 2:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % 2:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def gf2_solve_naive(mat: list[list[int]], rhs: list[int]) -> list[int] | None:
    """One solution of mat @ x = rhs over GF(2), or None."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    aug = [list(row) + [rhs[i] % 2] for i, row in enumerate(mat)]
    pivots = []
    rank = 0
    for col in range(n + 1):
        pivot = None
        for i in range(rank, m):
            if aug[i][col] % 2:
                pivot = i
                break
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        for i in range(m):
            if i != rank and aug[i][col] % 2:
                aug[i] = [(a + b) % 2 for a, b in zip(aug[i], aug[rank])]
        pivots.append(col)
        rank += 1
    if n in pivots:
        return None
    x = [0] * n
    for row_idx, col in enumerate(pivots):
        x[col] = aug[row_idx][n]
    return x


def projector_from_strings(checks: list[str], signs: list[int] | None = None) -> np.ndarray:
    """Dense code-space projector prod_i (I + s_i C_i) / 2."""
    n = len(checks[0])
    proj = np.eye(2**n, dtype=complex)
    signs = signs or [1] * len(checks)
    for s, c in zip(signs, checks):
        proj = proj @ (np.eye(2**n) + s * pauli_matrix(c)) / 2
    return proj


def apply_gate_matrix(state: np.ndarray, gate: np.ndarray, qubits: tuple[int, ...], m: int) -> np.ndarray:
    """Apply a k-qubit gate by materializing the full 2^m unitary. Slow, exact."""
    full = expand_gate(gate, qubits, m)
    return full @ state


def expand_gate(gate: np.ndarray, qubits: tuple[int, ...], m: int) -> np.ndarray:
    """Embed a k-qubit gate acting on the given wires into the full space.

    Builds the 2^m x 2^m matrix entry-by-entry from bitstrings; qubit 0 is
    the most significant bit of the basis index.
    """
    k = len(qubits)
    dim = 2**m
    full = np.zeros((dim, dim), dtype=complex)
    rest = [q for q in range(m) if q not in qubits]
    for col in range(dim):
        bits = [(col >> (m - 1 - q)) & 1 for q in range(m)]
        gcol = 0
        for q in qubits:
            gcol = (gcol << 1) | bits[q]
        for grow in range(2**k):
            amp = gate[grow, gcol]
            if amp == 0:
                continue
            new_bits = list(bits)
            for pos, q in enumerate(qubits):
                new_bits[q] = (grow >> (k - 1 - pos)) & 1
            row = 0
            for q in range(m):
                row = (row << 1) | new_bits[q]
            full[row, col] += amp
    return full


def circuit_unitary_naive(circuit, gate_matrix_fn) -> np.ndarray:
    """Full 2^m unitary of a layered circuit via entrywise gate embedding.

    Takes the per-gate matrix function as an argument so only the wire
    plumbing is under test here; gate matrices are checked elsewhere.
    """
    dim = 2**circuit.m
    total = np.eye(dim, dtype=complex)
    for layer in circuit.layers:
        for gate in layer:
            total = expand_gate(gate_matrix_fn(gate), gate.qubits, circuit.m) @ total
    return total


def partial_trace_naive(rho: np.ndarray, keep, m: int) -> np.ndarray:
    """Reduced density matrix by explicit bitstring loops (qubit 0 = MSB)."""
    keep = sorted(keep)
    traced = [q for q in range(m) if q not in keep]
    dim_keep = 2 ** len(keep)
    out = np.zeros((dim_keep, dim_keep), dtype=complex)

    def full_index(keep_bits: int, env_bits: int) -> int:
        idx = 0
        for q in range(m):
            if q in keep:
                bit = (keep_bits >> (len(keep) - 1 - keep.index(q))) & 1
            else:
                bit = (env_bits >> (len(traced) - 1 - traced.index(q))) & 1
            idx = (idx << 1) | bit
        return idx

    for a in range(dim_keep):
        for b in range(dim_keep):
            for e in range(2 ** len(traced)):
                out[a, b] += rho[full_index(a, e), full_index(b, e)]
    return out


def von_neumann_entropy_naive(rho: np.ndarray) -> float:
    """Entropy in bits via eigenvalues, clamping numerical dust."""
    vals = np.linalg.eigvalsh(rho)
    vals = vals[vals > 1e-12]
    return float(-(vals * np.log2(vals)).sum())
