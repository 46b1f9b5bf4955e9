"""Hermitian Pauli operators and stabilizer groups in the symplectic picture.

An n-qubit Pauli is stored as ``sign * (tensor of I/X/Y/Z letters)`` with the
letters packed into two n-bit integers: bit q of ``x`` is set when the letter
at qubit q contains X, bit q of ``z`` when it contains Z, both bits set
meaning Y. ``sign`` is +1 or -1, so every stored operator is Hermitian.

Products track the i-power of ``X^x Z^z`` reordering exactly, which makes the
sign exact whenever the factors commute -- the only case stabilizer algebra
relies on. For anticommuting factors the product is ±i times a Hermitian
Pauli; the i is dropped and the ± kept, a documented convention rather than a
phase-precise group representation.

Qubit q corresponds to character q of the string form ("XZZXI" acts with X on
qubit 0) and to the q-th factor of the dense kron product, i.e. qubit 0 is
the most significant bit of a computational-basis index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gf2

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}

_SINGLE_QUBIT_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliOperator:
    """sign * tensor of single-qubit letters, letters packed as x/z bit ints."""

    n: int
    x: int
    z: int
    sign: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one qubit")
        mask = (1 << self.n) - 1
        if not (0 <= self.x <= mask and 0 <= self.z <= mask):
            raise ValueError("x/z bits out of range for n qubits")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> tuple[int, ...]:
        bits = self.x | self.z
        return tuple(q for q in range(self.n) if (bits >> q) & 1)

    @property
    def y_count(self) -> int:
        return (self.x & self.z).bit_count()

    def letter(self, q: int) -> str:
        return _BITS_TO_LETTER[((self.x >> q) & 1, (self.z >> q) & 1)]

    def letters(self) -> str:
        return "".join(self.letter(q) for q in range(self.n))

    def __str__(self) -> str:
        return ("-" if self.sign < 0 else "") + self.letters()

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)


def identity(n: int) -> PauliOperator:
    return PauliOperator(n, 0, 0, 1)


def from_letters(text: str, n: int | None = None) -> PauliOperator:
    """Parse "XZZXI" / "-IXY" into an operator; round-trips with str()."""
    body = text.strip()
    sign = 1
    if body.startswith(("+", "-")):
        sign = -1 if body[0] == "-" else 1
        body = body[1:]
    if n is not None and len(body) != n:
        raise ValueError(f"expected {n} letters, got {len(body)} in {text!r}")
    if not body:
        raise ValueError("empty Pauli string")
    x = z = 0
    for q, ch in enumerate(body):
        if ch not in _LETTER_TO_BITS:
            raise ValueError(f"bad letter {ch!r} at position {q} in {text!r}")
        xb, zb = _LETTER_TO_BITS[ch]
        x |= xb << q
        z |= zb << q
    return PauliOperator(len(body), x, z, sign)


def single(n: int, q: int, letter: str, sign: int = 1) -> PauliOperator:
    xb, zb = _LETTER_TO_BITS[letter]
    return PauliOperator(n, xb << q, zb << q, sign)


def _parity(v: int) -> int:
    return v.bit_count() & 1


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """1 when the operators anticommute, 0 when they commute."""
    return _parity(p.x & q.z) ^ _parity(p.z & q.x)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    return symplectic_product(p, q) == 0


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Hermitian product representative.

    Exact (matrix-level) result when p and q commute. When they anticommute
    the true product is ±i times the returned operator; the returned sign is
    the ± and the i is dropped.
    """
    if p.n != q.n:
        raise ValueError("qubit counts differ")
    xr = p.x ^ q.x
    zr = p.z ^ q.z
    # p*q = s_p s_q i^e H(xr, zr) with H the +1 Hermitian representative
    e = (p.y_count + q.y_count - (xr & zr).bit_count() + 2 * (p.z & q.x).bit_count()) % 4
    sign = p.sign * q.sign * (1 if e in (0, 1) else -1)
    return PauliOperator(p.n, xr, zr, sign)


def product_phase_exponent(p: PauliOperator, q: PauliOperator) -> int:
    """e in p*q = sign_p sign_q i^e (Hermitian rep); even iff they commute."""
    xr = p.x ^ q.x
    zr = p.z ^ q.z
    return (p.y_count + q.y_count - (xr & zr).bit_count() + 2 * (p.z & q.x).bit_count()) % 4


def dense_matrix(p: PauliOperator) -> np.ndarray:
    """2^n x 2^n matrix, qubit 0 as the leftmost kron factor."""
    mat = np.array([[float(p.sign)]], dtype=complex)
    for q in range(p.n):
        mat = np.kron(mat, _SINGLE_QUBIT_MATS[p.letter(q)])
    return mat


def random_pauli(n: int, rng: np.random.Generator, allow_sign: bool = True) -> PauliOperator:
    x = int(rng.integers(0, 1 << n))
    z = int(rng.integers(0, 1 << n))
    sign = int(rng.choice((1, -1))) if allow_sign else 1
    return PauliOperator(n, x, z, sign)


def embed_pauli(p: PauliOperator, m: int, wires) -> PauliOperator:
    """Re-house the operator on m qubits, sending local qubit q to wires[q]."""
    wires = tuple(int(w) for w in wires)
    if len(wires) != p.n or len(set(wires)) != len(wires):
        raise ValueError(f"need {p.n} distinct wires, got {wires}")
    if any(not 0 <= w < m for w in wires):
        raise ValueError(f"wires {wires} outside [0, {m})")
    x = z = 0
    for q, w in enumerate(wires):
        x |= ((p.x >> q) & 1) << w
        z |= ((p.z >> q) & 1) << w
    return PauliOperator(m, x, z, p.sign)


# --- symplectic bit-vector helpers (v = x | z << n) ---


def _vec(p: PauliOperator) -> int:
    return p.x | (p.z << p.n)


def _vec_to_pauli(v: int, n: int, sign: int = 1) -> PauliOperator:
    mask = (1 << n) - 1
    return PauliOperator(n, v & mask, v >> n, sign)


def _omega(u: int, w: int, n: int) -> int:
    mask = (1 << n) - 1
    return _parity((u & mask) & (w >> n)) ^ _parity((u >> n) & (w & mask))


class _IntRowReducer:
    """Incremental GF(2) row reduction on bit-packed integers."""

    def __init__(self):
        self.rows: list[tuple[int, int]] = []  # (pivot_bit, row)

    def reduce(self, v: int) -> int:
        for pivot, row in self.rows:
            if (v >> pivot) & 1:
                v ^= row
        return v

    def add(self, v: int) -> bool:
        """Reduce and absorb; True when v was independent."""
        v = self.reduce(v)
        if v == 0:
            return False
        pivot = v.bit_length() - 1
        self.rows.append((pivot, v))
        self.rows.sort(reverse=True)
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def rank(self) -> int:
        return len(self.rows)


class StabilizerGroup:
    """A commuting set of Hermitian Pauli generators, -identity excluded.

    Generators may be dependent (families that retain redundant checks are
    allowed); rank bookkeeping uses the GF(2) row space. Treat instances as
    immutable.
    """

    def __init__(self, generators: tuple[PauliOperator, ...] | list[PauliOperator], n: int | None = None):
        generators = tuple(generators)
        if not generators and n is None:
            raise ValueError("need at least one generator (or an explicit n)")
        if n is None:
            n = generators[0].n
        if any(g.n != n for g in generators):
            raise ValueError("generators act on different qubit counts")
        for i, gi in enumerate(generators):
            for gj in generators[i + 1 :]:
                if not commutes(gi, gj):
                    raise ValueError(f"generators {gi} and {gj} anticommute")
        self.n = n
        self.generators = generators
        self._reducer = _IntRowReducer()
        self._independent: list[int] = []  # indices of an independent subset
        for idx, g in enumerate(generators):
            if self._reducer.add(_vec(g)):
                self._independent.append(idx)
        self._check_no_negative_identity()

    def _check_no_negative_identity(self):
        # kernel vectors of the transposed bit matrix are generator subsets
        # whose letters multiply to identity; their exact signs must be +1
        mat = self.bit_matrix()
        for combo in gf2.kernel_basis(mat.T):
            prod = self.product_of([i for i, c in enumerate(combo) if c])
            if prod.sign != 1:
                raise ValueError("-identity is generated: dependent product has sign -1")

    def __len__(self) -> int:
        return len(self.generators)

    def bit_matrix(self) -> np.ndarray:
        """(N, 2n) uint8 matrix, columns [x bits | z bits]."""
        out = np.zeros((len(self.generators), 2 * self.n), dtype=np.uint8)
        for i, g in enumerate(self.generators):
            for q in range(self.n):
                out[i, q] = (g.x >> q) & 1
                out[i, self.n + q] = (g.z >> q) & 1
        return out

    @property
    def rank(self) -> int:
        return self._reducer.rank

    @property
    def n_logical(self) -> int:
        return self.n - self.rank

    def syndrome_of(self, p: PauliOperator) -> tuple[int, ...]:
        """Anticommutation bit against each generator, in generator order."""
        return tuple(symplectic_product(g, p) for g in self.generators)

    def contains_bits(self, p: PauliOperator) -> bool:
        """Membership of p's letters in the group, ignoring p's sign."""
        return self._reducer.contains(_vec(p))

    def product_of(self, indices) -> PauliOperator:
        """Exact product of the chosen generators (they commute pairwise)."""
        acc = identity(self.n)
        for i in indices:
            acc = multiply(acc, self.generators[i])
        return acc

    def member_sign(self, p: PauliOperator) -> int | None:
        """+1 / -1 when ±p is in the group (sign relative to the group
        element with p's letters), None when the letters are not generated."""
        mat = self.bit_matrix()
        target = np.zeros(2 * self.n, dtype=np.uint8)
        for q in range(self.n):
            target[q] = (p.x >> q) & 1
            target[self.n + q] = (p.z >> q) & 1
        combo = gf2.solve(mat.T, target)
        if combo is None:
            return None
        element = self.product_of(np.nonzero(combo)[0])
        return p.sign * element.sign

    @property
    def locality(self) -> int:
        """max(check weight, qubit degree): the interaction locality bound."""
        if not self.generators:
            return 0
        max_weight = max(g.weight for g in self.generators)
        degree = [0] * self.n
        for g in self.generators:
            for q in g.support:
                degree[q] += 1
        return max(max_weight, max(degree))


def symplectic_rank(generators) -> int:
    """GF(2) rank of the stacked (x|z) rows."""
    if isinstance(generators, StabilizerGroup):
        return generators.rank
    reducer = _IntRowReducer()
    for g in generators:
        reducer.add(_vec(g))
    return reducer.rank


@dataclass(frozen=True)
class LogicalPair:
    """Anticommuting pair acting on one encoded qubit; commutes with the rest."""

    xbar: PauliOperator
    zbar: PauliOperator


def logical_pairs(group: StabilizerGroup, reduce_weight: bool = True) -> tuple[LogicalPair, ...]:
    """Symplectic Gram-Schmidt pairing of the centralizer modulo the group.

    Deterministic for a fixed generator order. With ``reduce_weight`` each
    representative is replaced by the minimum-weight element of its coset
    modulo the stabilizer group (exact enumeration when the group span is
    small, greedy descent otherwise); this preserves all pairings.
    """
    n = group.n
    mat = group.bit_matrix()
    # kernel of the symplectic form against every generator
    omega_rows = np.concatenate([mat[:, n:], mat[:, :n]], axis=1)
    kernel = gf2.kernel_basis(omega_rows)
    reducer = _IntRowReducer()
    for g in group.generators:
        reducer.add(_vec(g))
    reps: list[int] = []
    for row in kernel:
        v = 0
        for pos in range(2 * n):
            if row[pos]:
                v |= 1 << pos
        res = reducer.reduce(v)
        if res and reducer.add(res):
            reps.append(res)
    if len(reps) != 2 * group.n_logical:
        raise AssertionError("centralizer quotient dimension mismatch")

    pairs: list[tuple[int, int]] = []
    vecs = reps[:]
    while vecs:
        a = vecs.pop(0)
        partner = next((i for i, w in enumerate(vecs) if _omega(a, w, n)), None)
        if partner is None:
            raise AssertionError("symplectic pairing failed: isolated vector")
        b = vecs.pop(partner)
        vecs = [w ^ (a if _omega(w, b, n) else 0) ^ (b if _omega(w, a, n) else 0) for w in vecs]
        pairs.append((a, b))

    out = []
    for a, b in pairs:
        if reduce_weight:
            a = _min_weight_coset_rep(a, group)
            b = _min_weight_coset_rep(b, group)
        pa, pb = _vec_to_pauli(a, n), _vec_to_pauli(b, n)
        # prefer the X-type representative in the xbar slot when one side is
        # pure-Z and the other is not (CSS codes read naturally then)
        if pa.x == 0 and pb.x != 0:
            pa, pb = pb, pa
        out.append(LogicalPair(xbar=pa, zbar=pb))
    return tuple(out)


def _min_weight_coset_rep(v: int, group: StabilizerGroup, span_limit: int = 1 << 22) -> int:
    """Minimum-weight element of v * (group span), by Gray-code walk."""
    rows = [row for _, row in group._reducer.rows]
    r = len(rows)
    mask = (1 << group.n) - 1

    def wt(u: int) -> int:
        return ((u & mask) | (u >> group.n)).bit_count()

    if (1 << r) <= span_limit:
        best, best_w = v, wt(v)
        cur = v
        for counter in range(1, 1 << r):
            cur ^= rows[(counter & -counter).bit_length() - 1]
            w = wt(cur)
            if w < best_w or (w == best_w and cur < best):
                best, best_w = cur, w
        return best
    # greedy descent fallback for very large groups
    best, best_w = v, wt(v)
    improved = True
    while improved:
        improved = False
        for row in rows:
            cand = best ^ row
            if wt(cand) < best_w:
                best, best_w = cand, wt(cand)
                improved = True
    return best


def _weight_ascending_candidates(n: int, cap: int):
    """(x, z) bit ints of all Paulis with 1 <= weight <= cap, weight-ascending.

    Deterministic order: weight, then support combination (lexicographic),
    then letters (X < Y < Z at each position).
    """
    for w in range(1, cap + 1):
        for supp in itertools.combinations(range(n), w):
            for letters in itertools.product("XYZ", repeat=w):
                x = z = 0
                for q, ch in zip(supp, letters):
                    xb, zb = _LETTER_TO_BITS[ch]
                    x |= xb << q
                    z |= zb << q
                yield x, z, w


def min_weight_logical(
    group: StabilizerGroup,
    cap: int = 4,
    strategy: str = "enumerate",
) -> PauliOperator | None:
    """Lightest Pauli commuting with every generator but outside the group.

    Searches weight-ascending with early exit; returns None when the code has
    no logical qubits or no logical operator of weight <= cap exists.
    ``strategy`` is "enumerate" (plain) or "meet_in_middle" (half-support
    tables joined on matching syndrome).
    """
    if group.n_logical == 0:
        return None
    if strategy == "meet_in_middle":
        return _min_weight_logical_mitm(group, cap)
    if strategy != "enumerate":
        raise ValueError(f"unknown strategy {strategy!r}")
    gens = [(g.x, g.z) for g in group.generators]
    n = group.n
    for x, z, _ in _weight_ascending_candidates(n, cap):
        ok = True
        for gx, gz in gens:
            if (_parity(x & gz) ^ _parity(z & gx)):
                ok = False
                break
        if ok and not group._reducer.contains(x | (z << n)):
            return PauliOperator(n, x, z, 1)
    return None


def _min_weight_logical_mitm(group: StabilizerGroup, cap: int) -> PauliOperator | None:
    n = group.n
    half = n // 2
    gens = [(g.x, g.z) for g in group.generators]
    left_mask = (1 << half) - 1
    right_mask = ((1 << n) - 1) ^ left_mask

    def syndrome(x: int, z: int) -> tuple[int, ...]:
        return tuple(_parity(x & gz) ^ _parity(z & gx) for gx, gz in gens)

    def half_table(qubits: list[int]) -> dict[int, dict[tuple, list[tuple[int, int]]]]:
        table: dict[int, dict[tuple, list[tuple[int, int]]]] = {w: {} for w in range(cap + 1)}
        table[0] = {syndrome(0, 0): [(0, 0)]}
        for w in range(1, cap + 1):
            bucket: dict[tuple, list[tuple[int, int]]] = {}
            for supp in itertools.combinations(qubits, w):
                for letters in itertools.product("XYZ", repeat=w):
                    x = z = 0
                    for q, ch in zip(supp, letters):
                        xb, zb = _LETTER_TO_BITS[ch]
                        x |= xb << q
                        z |= zb << q
                    bucket.setdefault(syndrome(x, z), []).append((x, z))
            table[w] = bucket
        return table

    left = half_table(list(range(half)))
    right = half_table(list(range(half, n)))
    for w in range(1, cap + 1):
        for wl in range(0, w + 1):
            wr = w - wl
            if wr > cap:
                continue
            for syn, lefts in left[wl].items():
                rights = right[wr].get(syn)
                if not rights:
                    continue
                for lx, lz in lefts:
                    for rx, rz in rights:
                        x, z = lx | rx, lz | rz
                        if (x | z) == 0:
                            continue
                        if not group._reducer.contains(x | (z << n)):
                            return PauliOperator(n, x, z, 1)
    return None


@dataclass(frozen=True)
class BestDistanceReport:
    """Per-pair distance figures used by the uncertainty-based bounds.

    d_prime: over the chosen pair, minimum weight of a logical operator whose
    action on that encoded qubit is nontrivial (anticommutes with xbar or
    zbar). w: max(|xbar|, |zbar|) of the chosen pair. The chosen pair
    maximizes d_prime.
    """

    pair_index: int
    d_prime: int
    w: int
    witness: PauliOperator


def best_distance(
    group: StabilizerGroup,
    pairs: tuple[LogicalPair, ...] | None = None,
    cap: int = 6,
) -> BestDistanceReport | None:
    """Best (largest) single-pair distance over the code's logical pairs."""
    if pairs is None:
        pairs = logical_pairs(group)
    if not pairs:
        return None
    gens = [(g.x, g.z) for g in group.generators]
    n = group.n
    best: BestDistanceReport | None = None
    for idx, pair in enumerate(pairs):
        xb, zb = pair.xbar, pair.zbar
        found = None
        for x, z, w in _weight_ascending_candidates(n, cap):
            commuting = True
            for gx, gz in gens:
                if (_parity(x & gz) ^ _parity(z & gx)):
                    commuting = False
                    break
            if not commuting:
                continue
            hits_pair = (_parity(x & xb.z) ^ _parity(z & xb.x)) or (
                _parity(x & zb.z) ^ _parity(z & zb.x)
            )
            if hits_pair:
                found = (w, PauliOperator(n, x, z, 1))
                break
        if found is None:
            continue
        w_pair = max(xb.weight, zb.weight)
        if best is None or found[0] > best.d_prime:
            best = BestDistanceReport(idx, found[0], w_pair, found[1])
    return best


@dataclass(frozen=True)
class KnillLaflammeReport:
    """Outcome of projecting an error between code states.

    eta is the scalar in (code projector) E (code projector) = eta * (code
    projector): ±1 for group members, 0 for detected errors. A logical error
    has no such scalar; is_logical marks that violation.
    """

    eta: int | None
    is_logical: bool
    detail: str


def kl_constant(group: StabilizerGroup, error: PauliOperator) -> KnillLaflammeReport:
    if error.n != group.n:
        raise ValueError("error acts on a different qubit count")
    if any(group.syndrome_of(error)):
        return KnillLaflammeReport(eta=0, is_logical=False, detail="anticommutes with a check")
    sign = group.member_sign(error)
    if sign is not None:
        return KnillLaflammeReport(eta=sign, is_logical=False, detail="group member")
    return KnillLaflammeReport(
        eta=None, is_logical=True, detail="commutes with all checks but is not generated"
    )
