"""Closed-form depth lower bounds and the distance/uncertainty tool chest.

Every formula is evaluated exactly as stated, logs base 2. Bounds whose
source argument never fixes its constant carry `constants: "dropped"` and
report the value inside the asymptotic notation; explicit inequalities are
rearranged for t and carry `constants: "explicit"`. Applicability flags are
part of the result, never silently folded into the value: at desk scale
most gates are closed (log d is tiny) and the honest report says so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .circuits import LayeredCircuit, lightcone, reverse_circuit
from .codes import Code, code_parameters
from .hamiltonians import build_code_hamiltonian, energy_report
from .paulis import LogicalPair, StabilizerGroup, best_distance
from .states import (
    StabilizerMixture,
    dense_qubit_limit,
    partial_trace,
    pauli_expectation_rho,
    pauli_expectation_vec,
    project_pauli_vec,
    rho_from_vector,
    trace_distance,
    zero_mixture,
    zero_vector,
)

__all__ = [
    "BoundInputs",
    "best_distance",
    "depth_lower_bounds",
    "distinguishing_region",
    "lightcone_count_check",
    "product_state_separation_check",
    "region_distance_threshold",
    "trace_distance_to_code",
    "uncertainty_check",
    "zero_state_distance_check",
]


@dataclass(frozen=True)
class BoundInputs:
    """Parameter bundle consumed by depth_lower_bounds.

    epsilon is the per-check energy fraction (tr(H phi) <= epsilon * N for
    the sum-normalized Hamiltonian), delta a trace distance, f a fidelity
    to the code space, t the candidate depth, m the total qubit count of
    the low-depth circuit (auto-trimmed to 2^t * n, the largest lightcone
    a depth-t preparation of n code qubits can see). c_ell is the free
    constant slot of the rate bound; its source never fixes a value.
    """

    n: int
    k: int | None = None
    d: int | None = None
    ell: int | None = None
    n_checks: int | None = None
    epsilon: float | None = None
    delta: float | None = None
    t: int | None = None
    f: float | None = None
    m: int | None = None
    c_ell: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.epsilon is not None and not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon {self.epsilon} outside (0, 1)")
        if self.delta is not None and not 0.0 < self.delta < 0.5:
            raise ValueError(f"delta {self.delta} outside (0, 1/2)")
        if self.f is not None and not 0.0 < self.f <= 1.0:
            raise ValueError(f"fidelity {self.f} outside (0, 1]")
        if self.c_ell <= 0.0:
            raise ValueError("c_ell must be positive")
        if self.m is not None and self.t is not None:
            cap = 2**self.t * self.n
            if self.m > cap:
                object.__setattr__(self, "m", cap)

    def missing(self, *names: str) -> list[str]:
        return [name for name in names if getattr(self, name) is None]


def _entry(value, constants, applicable=True, **extra) -> dict:
    out = {"value": value, "applicable": applicable, "constants": constants}
    out.update(extra)
    return out


def _skip(missing: list[str], constants: str) -> dict:
    return _entry(None, constants, applicable=False, missing=missing)


def depth_lower_bounds(inputs: BoundInputs) -> dict:
    """Evaluate every closed-form depth bound on one parameter bundle.

    Returns one entry per bound; see the module docstring for the
    constants convention. Each entry reports its own applicability, e.g.
    the rate bound needs t < log d - 2 ell^3 which no desk-scale code
    satisfies, and that flag arriving False is the correct answer there.
    """
    n, k, d = inputs.n, inputs.k, inputs.d
    ell, eps, delta = inputs.ell, inputs.epsilon, inputs.delta
    t, f, m = inputs.t, inputs.f, inputs.m
    report: dict[str, dict] = {}

    # min{log d, log((k + d) / (n sqrt(eps log 1/eps)))}, constant-free
    gaps = inputs.missing("k", "d", "epsilon")
    if gaps:
        report["thm1"] = _skip(gaps, "dropped")
    else:
        loge = eps * math.log2(1.0 / eps)
        value = min(math.log2(d), math.log2((k + d) / (n * math.sqrt(loge))))
        report["thm1"] = _entry(value, "dropped")

    # 2^{2t} > k / (c_ell n eps log(1/eps)), open while t < log d - 2 ell^3
    gaps = inputs.missing("k", "d", "ell", "epsilon")
    if gaps:
        report["thm2_rate"] = _skip(gaps, "explicit")
    else:
        ratio = k / (inputs.c_ell * n * eps * math.log2(1.0 / eps))
        window = math.log2(d) - 2.0 * ell**3
        applicable = t is not None and t < window
        report["thm2_rate"] = _entry(
            0.5 * math.log2(ratio) if ratio > 0 else None,
            "explicit",
            applicable=applicable,
            window=window,
            c_ell=inputs.c_ell,
        )

    # 2^{2t} >= d / (2^6 n sqrt(ell eps log 1/eps)), open while t < log d - 1
    gaps = inputs.missing("d", "ell", "epsilon")
    if gaps:
        report["thm3_distance"] = _skip(gaps, "explicit")
    else:
        ratio = d / (2**6 * n * math.sqrt(ell * eps * math.log2(1.0 / eps)))
        window = math.log2(d) - 1.0
        applicable = t is not None and t < window
        report["thm3_distance"] = _entry(
            0.5 * math.log2(ratio), "explicit", applicable=applicable, window=window
        )

    # log min{d, k / (2 delta log(1/delta) n)} for pure states near the code
    gaps = inputs.missing("k", "d", "delta")
    if gaps:
        report["cor1_warmup"] = _skip(gaps, "explicit")
    else:
        gate = 2.0 * delta * math.log2(1.0 / delta)
        condition = k > gate * n
        value = math.log2(min(d, k / (gate * n))) if condition else None
        report["cor1_warmup"] = _entry(
            value, "explicit", applicable=condition, gate=gate * n
        )

    # k > 2 delta log(1/delta) m forces depth above log d
    gaps = inputs.missing("k", "d", "delta", "m")
    if gaps:
        report["lem1_entropy"] = _skip(gaps, "explicit")
    else:
        gate = 2.0 * delta * math.log2(1.0 / delta) * m
        condition = k > gate
        report["lem1_entropy"] = _entry(
            math.log2(d) if condition else None,
            "explicit",
            applicable=condition,
            gate=gate,
        )

    # 2^{2t} >= min(d, k sqrt(d) / (64 sqrt(ell) log^2(d ell) n sqrt(log 1/f)))
    gaps = inputs.missing("k", "d", "ell", "f")
    if gaps:
        report["lem2_agsp"] = _skip(gaps, "explicit")
    else:
        logf = math.log2(1.0 / f) if f < 1.0 else 0.0
        applicable = logf > 0.0 and d * ell >= 2
        if applicable:
            denom = 64.0 * math.sqrt(ell) * math.log2(d * ell) ** 2 * n * math.sqrt(logf)
            value = 0.5 * math.log2(min(d, k * math.sqrt(d) / denom))
        else:
            value = None
        report["lem2_agsp"] = _entry(value, "explicit", applicable=applicable)

    # log(d / (delta n)) for ancilla-free preparations, constant-free
    gaps = inputs.missing("d", "delta")
    if gaps:
        report["lem4_lineardist"] = _skip(gaps, "dropped")
    else:
        report["lem4_lineardist"] = _entry(math.log2(d / (delta * n)), "dropped")

    # c min{log n, log 1/eps} after amplification, constant-free
    gaps = inputs.missing("epsilon")
    if gaps:
        report["cor2_amplified"] = _skip(gaps, "dropped")
    else:
        report["cor2_amplified"] = _entry(
            min(math.log2(n), math.log2(1.0 / eps)), "dropped"
        )
    return report


def _as_group(code_or_group) -> StabilizerGroup:
    return code_or_group.group if isinstance(code_or_group, Code) else code_or_group


def _code_overlap(state, group: StabilizerGroup) -> float:
    """<psi| Pi |psi> for the code projector Pi, by sequential halving."""
    if isinstance(state, StabilizerMixture):
        if not state.is_pure:
            raise ValueError("pure state required")
        f_sq = 1.0
        current = state
        for check in group.generators:
            prob, current = current.project_pauli(check)
            f_sq *= prob
            if current is None:
                return 0.0
        return f_sq
    vec = np.asarray(state, dtype=complex)
    m = vec.shape[0].bit_length() - 1
    if m > dense_qubit_limit():
        raise ValueError(f"dense limit exceeded: {m} qubits")
    f_sq = 1.0
    for check in group.generators:
        prob, vec = project_pauli_vec(vec, check)
        f_sq *= prob
        if vec is None:
            return 0.0
    return f_sq


def _dense_code_projector(group: StabilizerGroup) -> np.ndarray:
    dim = 2**group.n
    proj = np.eye(dim, dtype=complex)
    for check in group.generators:
        cols = np.zeros((dim, dim), dtype=complex)
        for j in range(dim):
            prob, branch = project_pauli_vec(proj[:, j].copy(), check)
            if branch is not None:
                cols[:, j] = branch * np.sqrt(prob)
        proj = cols
    return proj


def trace_distance_to_code(state, code_or_group, cross_check: bool | None = None) -> dict:
    """Distance of a pure state from the code space.

    Reports f = |Pi psi| and the pure-vs-subspace trace distance
    sqrt(1 - f^2): the nearest code state in that convention is the
    normalized projection, and no mixed code state can push fidelity
    above f. When cross_check is on (default for n <= 9) the overlap is
    recomputed through an explicitly assembled dense projector.
    """
    group = _as_group(code_or_group)
    f_sq = _code_overlap(state, group)
    f_sq = min(max(f_sq, 0.0), 1.0)
    out = {
        "f_squared": f_sq,
        "fidelity": math.sqrt(f_sq),
        "trace_distance": math.sqrt(1.0 - f_sq),
        "convention": "pure-vs-subspace",
    }
    if cross_check is None:
        cross_check = group.n <= 9
    if cross_check and group.n <= 9:
        vec = state.dense_vector() if isinstance(state, StabilizerMixture) else state
        vec = np.asarray(vec, dtype=complex)
        proj = _dense_code_projector(group)
        out["cross_check"] = float(np.linalg.norm(proj @ vec) ** 2)
        assert abs(out["cross_check"] - f_sq) < 1e-9
    return out


def zero_state_distance_check(code_or_group, distance: int | None = None) -> dict:
    """Does |0^n> sit at trace distance more than d/(6n) from the code?

    Requires at least one logical qubit. A code whose distance comes from
    a weight-1 logical can put |0^n> inside the code space; the report
    then carries holds = False, which is the honest answer, and the
    built-in sweep only feeds codes with d >= 2.
    """
    group = _as_group(code_or_group)
    if group.n_logical < 1:
        raise ValueError("code encodes nothing: k = 0")
    if distance is None:
        distance = code_parameters(group).d
    if distance is None:
        raise ValueError("distance unknown; pass distance explicitly")
    rep = trace_distance_to_code(zero_mixture(group.n), group, cross_check=False)
    threshold = distance / (6.0 * group.n)
    return {
        "distance": rep["trace_distance"],
        "fidelity": rep["fidelity"],
        "threshold": threshold,
        "d": int(distance),
        "holds": rep["trace_distance"] > threshold,
    }


def _pauli_expectation(state, p) -> float:
    if isinstance(state, StabilizerMixture):
        return float(state.expectation(p))
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return float(np.real(pauli_expectation_vec(arr, p)))
    return float(np.real(pauli_expectation_rho(arr, p)))


def uncertainty_check(state, pair: LogicalPair) -> dict:
    """Anti-commuting logicals cannot both be sharp: ex^2 + ez^2 <= 1."""
    ex = _pauli_expectation(state, pair.xbar)
    ez = _pauli_expectation(state, pair.zbar)
    return {"ex": ex, "ez": ez, "holds": ex**2 + ez**2 <= 1.0 + 1e-9}


def _is_product_vector(vec: np.ndarray, m: int) -> bool:
    for q in range(m):
        mat = np.moveaxis(vec.reshape((2,) * m), q, 0).reshape(2, -1)
        if np.linalg.matrix_rank(mat, tol=1e-10) > 1:
            return False
    return True


def product_state_separation_check(state, code_or_group) -> dict:
    """Product states sit at least d'/(8w) away from any code state.

    distance is the pure-vs-subspace value sqrt(1 - f^2); distance_floor
    = 1 - f^2 lower-bounds the distance to every mixed code state, and
    holds checks the bound against that conservative floor. Non-product
    input is reported as a precondition violation, not a counterexample.
    """
    group = _as_group(code_or_group)
    if isinstance(state, StabilizerMixture):
        if not state.is_pure:
            raise ValueError("pure state required")
        product = all(
            np.trace(mat @ mat).real > 1.0 - 1e-10
            for mat in (state.marginal((q,)) for q in range(state.m))
        )
        overlap_state = state
    else:
        vec = np.asarray(state, dtype=complex)
        m = vec.shape[0].bit_length() - 1
        product = _is_product_vector(vec, m)
        overlap_state = vec
    f_sq = _code_overlap(overlap_state, group)
    rep = best_distance(group)
    bound = rep.d_prime / (8.0 * rep.w)
    out = {
        "distance": math.sqrt(max(0.0, 1.0 - f_sq)),
        "distance_floor": 1.0 - f_sq,
        "bound": bound,
        "d_prime": rep.d_prime,
        "w": rep.w,
        "is_product": product,
        "precondition_violated": not product,
    }
    out["holds"] = out["distance_floor"] >= bound - 1e-12 if product else None
    return out


def region_distance_threshold(size: int, t: int, w: int) -> float:
    """Marginal trace distance a K-qubit region must show at depth t."""
    return size / (2.0 ** (t + 4) * w)


def _dense_rho(state) -> np.ndarray:
    if isinstance(state, StabilizerMixture):
        return state.dense_rho()
    arr = np.asarray(state, dtype=complex)
    return rho_from_vector(arr) if arr.ndim == 1 else arr


def distinguishing_region(psi, theta, size_cap: int, threshold: float | None = None) -> dict:
    """Smallest region whose marginals tell two states apart.

    Exhaustive sweep over regions of size 1..size_cap in lexicographic
    order. With a threshold, returns the first region at or above it;
    without one, the maximizing region. region None means no region
    distinguishes the states (identical marginals everywhere).
    """
    rho = _dense_rho(psi)
    sigma = _dense_rho(theta)
    if rho.shape != sigma.shape:
        raise ValueError("states live on different qubit counts")
    m = rho.shape[0].bit_length() - 1
    if m > dense_qubit_limit():
        raise ValueError(f"dense limit exceeded: {m} qubits")
    size_cap = min(size_cap, m)
    best_region = None
    best_dist = 0.0
    for size in range(1, size_cap + 1):
        for region in combinations(range(m), size):
            dist = trace_distance(
                partial_trace(rho, region, m), partial_trace(sigma, region, m)
            )
            if threshold is not None and dist >= threshold:
                return {"region": region, "distance": dist, "threshold": threshold}
            if dist > best_dist + 1e-12:
                best_dist = dist
                best_region = region
    if threshold is not None:
        return {"region": None, "distance": best_dist, "threshold": threshold}
    if best_dist < 1e-12:
        best_region = None
    return {"region": best_region, "distance": best_dist, "threshold": None}


def lightcone_count_check(w_circuit: LayeredCircuit, code_or_group, phi=None) -> dict:
    """Average lightcone energy sandwich for a syndrome-extracting circuit.

    For W on m data + N register wires, every wire j owns the SMA checks
    whose register wire falls in j's lightcone under W reversed. The mean
    over j of that owned energy is squeezed between E/(m+N) and
    2^{2 depth} E/(m+N): each check is owned at least once (by its own
    register wire) and at most by every wire its reversed cone reaches.
    Energies are per-term values of the data state phi (default |0^m>).
    """
    group = _as_group(code_or_group)
    n_checks = len(group.generators)
    m = w_circuit.m - n_checks
    if m < group.n:
        raise ValueError("circuit too small for data block plus register")
    if phi is None:
        phi = zero_mixture(m)
    ham = build_code_hamiltonian(group)
    eps = energy_report(phi, ham, code_qubits=tuple(range(group.n))).per_term
    total = float(sum(eps))

    reversed_w = reverse_circuit(w_circuit)
    counts = [0] * n_checks
    owned = []
    for j in range(w_circuit.m):
        cone = lightcone(reversed_w, (j,))
        sma = [i for i in range(n_checks) if m + i in cone]
        for i in sma:
            counts[i] += 1
        owned.append(sum(eps[i] for i in sma))
    wires = w_circuit.m
    depth = w_circuit.depth
    mid = float(sum(owned)) / wires
    lhs = total / wires
    rhs = 2.0 ** (2 * depth) * total / wires
    return {
        "lhs": lhs,
        "mid": mid,
        "rhs": rhs,
        "cc": depth,
        "counts": tuple(counts),
        "count_floor_ok": all(c >= 1 for c in counts),
        "holds": lhs - 1e-12 <= mid <= rhs + 1e-12,
    }
