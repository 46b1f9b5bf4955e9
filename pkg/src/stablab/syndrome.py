"""Coherent syndrome measurement and the decohered branch state.

The extraction circuit V attaches one ancilla wire per check (check i on wire
n + i), Hadamards all ancillas, applies each check as a chain of controlled
Paulis from its ancilla, and Hadamards again. Checks are scheduled by a
proper coloring of the check-overlap graph, so same-color checks run their
chains in parallel and the depth is at most ell * (number of colors) plus the
two Hadamard layers. On input |phi>|0^N> the output is

    sum_s (D_s |phi>) (x) |s>,    D_s = prod_i (I + (-1)^{s_i} C_i) / 2.

Measuring the ancillas instead of keeping them coherent gives the decohered
state: a probability-weighted family of syndrome branches. Both views are
built here, with the branch map kept implicit (no ancilla materialization)
so it scales past dense limits on the tableau backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import Gate, LayeredCircuit
from .hamiltonians import build_code_hamiltonian, energy_report
from .paulis import PauliOperator, StabilizerGroup
from .states import (
    StabilizerMixture,
    apply_pauli_vec,
    dense_qubit_limit,
    fidelity,
    partial_trace,
    project_pauli_vec,
)

_CONTROLLED = {"X": "CX", "Y": "CY", "Z": "CZ"}


@dataclass(frozen=True)
class CheckOverlapGraph:
    n_checks: int
    edges: frozenset[tuple[int, int]]

    def neighbors(self, i: int) -> tuple[int, ...]:
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return tuple(sorted(out))

    @property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n_checks
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return tuple(deg)

    @property
    def max_degree(self) -> int:
        return max(self.degrees) if self.n_checks else 0


def overlap_graph(group: StabilizerGroup) -> CheckOverlapGraph:
    """Edges between checks whose supports intersect."""
    supports = [set(g.support) for g in group.generators]
    edges = set()
    for i in range(len(supports)):
        for j in range(i + 1, len(supports)):
            if supports[i] & supports[j]:
                edges.add((i, j))
    return CheckOverlapGraph(n_checks=len(supports), edges=frozenset(edges))


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]

    @property
    def n_colors(self) -> int:
        return max(self.colors) + 1 if self.colors else 0


def greedy_coloring(graph: CheckOverlapGraph) -> Coloring:
    """Greedy proper coloring, descending degree order with index tie-break."""
    degrees = graph.degrees
    order = sorted(range(graph.n_checks), key=lambda i: (-degrees[i], i))
    adjacency: dict[int, set[int]] = {i: set() for i in range(graph.n_checks)}
    for a, b in graph.edges:
        adjacency[a].add(b)
        adjacency[b].add(a)
    colors = [-1] * graph.n_checks
    for v in order:
        taken = {colors[u] for u in adjacency[v] if colors[u] >= 0}
        c = 0
        while c in taken:
            c += 1
        colors[v] = c
    return Coloring(colors=tuple(colors))


@dataclass(frozen=True)
class SyndromeCircuit:
    circuit: LayeredCircuit
    coloring: Coloring
    group: StabilizerGroup = field(repr=False)

    @property
    def n_data(self) -> int:
        return self.group.n

    @property
    def n_ancillas(self) -> int:
        return len(self.group.generators)

    @property
    def depth(self) -> int:
        return self.circuit.depth

    @property
    def depth_bound_constructive(self) -> int:
        """ell * (colors used) + terminal layers, what the schedule achieves."""
        ell = self.group.locality
        extra = 3 if any(g.sign < 0 for g in self.group.generators) else 2
        return ell * self.coloring.n_colors + extra

    @property
    def depth_bound_statement(self) -> int:
        """The 2 ell^3 promise; meaningful for ell >= 2."""
        return 2 * self.group.locality**3


def build_syndrome_circuit(group: StabilizerGroup, coloring: Coloring | None = None) -> SyndromeCircuit:
    """Layered extraction circuit on n + N wires.

    A weight-w check of color c contributes its w controlled-Pauli gates to
    layers of slot c; slots run sequentially and same-color checks fill the
    same layers side by side. Checks with sign -1 get a Z on their ancilla
    (controlled minus sign) in one shared layer before the final Hadamards.
    """
    n = group.n
    checks = group.generators
    big = overlap_graph(group)
    if coloring is None:
        coloring = greedy_coloring(big)
    if len(coloring.colors) != len(checks):
        raise ValueError("coloring length does not match check count")
    for a, b in big.edges:
        if coloring.colors[a] == coloring.colors[b]:
            raise ValueError(f"improper coloring: checks {a} and {b} overlap and share a color")

    m = n + len(checks)
    layers: list[tuple[Gate, ...]] = []
    layers.append(tuple(Gate(qubits=(n + i,), name="H") for i in range(len(checks))))
    for c in range(coloring.n_colors):
        members = [i for i, col in enumerate(coloring.colors) if col == c]
        max_w = max(checks[i].weight for i in members)
        for step in range(max_w):
            gates = []
            for i in members:
                support = sorted(checks[i].support)
                if step < len(support):
                    q = support[step]
                    gates.append(Gate(qubits=(n + i, q), name=_CONTROLLED[checks[i].letter(q)]))
            layers.append(tuple(gates))
    negatives = [i for i, g in enumerate(checks) if g.sign < 0]
    if negatives:
        layers.append(tuple(Gate(qubits=(n + i,), name="Z") for i in negatives))
    layers.append(tuple(Gate(qubits=(n + i,), name="H") for i in range(len(checks))))

    circuit = LayeredCircuit(m=m, layers=tuple(layers), code_qubits=tuple(range(n)))
    built = SyndromeCircuit(circuit=circuit, coloring=coloring, group=group)
    if group.locality >= 2:
        assert built.depth <= built.depth_bound_statement
    return built


# --- decohered branch state ---


@dataclass(frozen=True)
class DecoheredState:
    """Syndrome branches s -> (p_s, normalized post-measurement state)."""

    n_checks: int
    branches: tuple[tuple[tuple[int, ...], float, object], ...]  # lex-sorted

    @property
    def total_probability(self) -> float:
        return float(sum(p for _, p, _ in self.branches))

    @property
    def branch_count(self) -> int:
        return len(self.branches)

    def probability_of(self, bits) -> float:
        key = tuple(int(b) & 1 for b in bits)
        for s, p, _ in self.branches:
            if s == key:
                return p
        return 0.0

    @property
    def mixing_entropy(self) -> float:
        """Shannon entropy (bits) of the syndrome distribution."""
        probs = np.array([p for _, p, _ in self.branches])
        probs = probs[probs > 1e-14]
        return float(-(probs * np.log2(probs)).sum())

    @property
    def average_syndrome_weight(self) -> float:
        return float(sum(p * sum(s) for s, p, _ in self.branches))

    def to_dict(self) -> dict:
        return {
            "branches": [
                {"s": "".join(str(b) for b in s), "p": p} for s, p, _ in self.branches
            ]
        }


def decohere(state, group: StabilizerGroup, prune: float = 1e-14) -> DecoheredState:
    """Measure every check; returns the branch map ordered by syndrome.

    Works on stabilizer mixtures (exact probabilities) and dense vectors.
    The commuting checks make the measurement order irrelevant.
    """
    if isinstance(state, StabilizerMixture):
        work = [((), 1.0, state)]
        for g in group.generators:
            nxt = []
            for bits, p, st in work:
                q_plus, st_plus = st.project_pauli(g)
                if q_plus > 0 and st_plus is not None:
                    nxt.append((bits + (0,), p * q_plus, st_plus))
                neg = PauliOperator(g.n, g.x, g.z, -g.sign)
                q_minus, st_minus = st.project_pauli(neg)
                if q_minus > 0 and st_minus is not None:
                    nxt.append((bits + (1,), p * q_minus, st_minus))
            work = nxt
    else:
        psi = np.asarray(state, dtype=complex)
        work = [((), 1.0, psi)]
        for g in group.generators:
            nxt = []
            for bits, p, vec in work:
                for outcome, sgn in ((0, 1), (1, -1)):
                    signed = PauliOperator(g.n, g.x, g.z, sgn * g.sign)
                    q, branch = project_pauli_vec(vec, signed)
                    if branch is not None and p * q > prune:
                        nxt.append((bits + (outcome,), p * q, branch))
            work = nxt
    work.sort(key=lambda item: item[0])
    return DecoheredState(
        n_checks=len(group.generators),
        branches=tuple((bits, float(p), st) for bits, p, st in work),
    )


def coherent_extension(phi: np.ndarray, group: StabilizerGroup) -> np.ndarray:
    """sum_s (D_s phi) (x) |s> on n + N wires, ancilla i carrying s_i."""
    phi = np.asarray(phi, dtype=complex)
    n = group.n
    N = len(group.generators)
    components = [((), phi)]
    for g in group.generators:
        nxt = []
        for bits, vec in components:
            moved = apply_pauli_vec(vec, g)
            plus = (vec + moved) / 2
            minus = (vec - moved) / 2
            if np.vdot(plus, plus).real > 1e-28:
                nxt.append((bits + (0,), plus))
            if np.vdot(minus, minus).real > 1e-28:
                nxt.append((bits + (1,), minus))
        components = nxt
    out = np.zeros(2 ** (n + N), dtype=complex)
    for bits, vec in components:
        s_packed = 0
        for i, b in enumerate(bits):
            s_packed |= b << (N - 1 - i)
        out[s_packed :: 2**N] += vec  # data index strides the high bits
    return out


@dataclass(frozen=True)
class GentleMeasurementReport:
    fidelity: float
    bound: float
    holds: bool
    region: tuple[int, ...]
    sma_checks: tuple[int, ...]


def gentle_measurement_report(phi, group: StabilizerGroup, region) -> GentleMeasurementReport:
    """Fidelity of the coherent and decohered marginals on a region.

    The guarantee: F(psi_R, Psi_R) >= 1 - sum of the input state's per-check
    energies over checks whose ancilla lies in R.
    """
    if isinstance(phi, StabilizerMixture):
        phi = phi.dense_vector()
    phi = np.asarray(phi, dtype=complex)
    n = group.n
    N = len(group.generators)
    if n + N > dense_qubit_limit():
        raise ValueError(f"dense limit exceeded: {n + N} qubits > {dense_qubit_limit()}")
    region = tuple(sorted(int(q) for q in region))
    if any(not 0 <= q < n + N for q in region):
        raise ValueError("region outside the data + ancilla wires")

    psi = coherent_extension(phi, group)
    psi_r = partial_trace(np.outer(psi, psi.conj()), region, n + N)

    dim = 2 ** (n + N)
    theta = np.zeros((dim, dim), dtype=complex)
    for bits, p, branch in decohere(phi, group).branches:
        s_packed = 0
        for i, b in enumerate(bits):
            s_packed |= b << (N - 1 - i)
        block = p * np.outer(branch, branch.conj())
        theta[s_packed :: 2**N, s_packed :: 2**N] += block
    theta_r = partial_trace(theta, region, n + N)

    sma = tuple(i for i in range(N) if n + i in region)
    eps = energy_report(phi, build_code_hamiltonian(group)).per_term
    bound = 1.0 - sum(eps[i] for i in sma)
    fid = fidelity(psi_r, theta_r)
    return GentleMeasurementReport(
        fidelity=fid, bound=bound, holds=fid >= bound - 1e-9, region=region, sma_checks=sma
    )
