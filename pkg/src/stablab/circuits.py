"""Layered circuits of one- and two-qubit gates, and their lightcones.

A circuit is a sequence of layers; each layer holds gates on pairwise
disjoint wires, so depth equals the number of layers. Gates come in three
kinds: a named Clifford elementary, a "word" (a short composition of named
elementaries acting inside one gate slot, still a single gate for depth and
lightcone purposes), or a dense unitary payload. Any wiring is allowed
(all-to-all connectivity); fan-in/out of a gate is at most two wires.

Lightcones are exact gate-connectivity cones (not the 2^t upper bound): the
cone of a region A is everything reachable by chains of overlapping gates
walking from the last layer back to the first, and always contains A.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)
_CY = np.block([[np.eye(2), np.zeros((2, 2))], [np.zeros((2, 2)), _Y]]).astype(complex)
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)

NAMED_GATES: dict[str, np.ndarray] = {
    "H": _H,
    "S": _S,
    "SDG": _S.conj().T,
    "X": _X,
    "Y": _Y,
    "Z": _Z,
    "CX": _CX,
    "CZ": _CZ,
    "CY": _CY,
    "SWAP": _SWAP,
}

_DAGGER_NAME = {name: name for name in NAMED_GATES} | {"S": "SDG", "SDG": "S"}

# word entries: (elementary name, local wire positions within the gate slot)
WordStep = tuple[str, tuple[int, ...]]


@dataclass(frozen=True, eq=False)
class Gate:
    """One gate slot: exactly one of name / word / matrix is set.

    ``qubits`` orders the wires; for named two-qubit gates the first wire is
    the control. A word applies its steps first-entry-first, each step naming
    local positions into ``qubits``.
    """

    qubits: tuple[int, ...]
    name: str | None = None
    word: tuple[WordStep, ...] | None = None
    matrix: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.qubits) not in (1, 2) or len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"gate needs 1 or 2 distinct wires, got {self.qubits}")
        kinds = sum(v is not None for v in (self.name, self.word, self.matrix))
        if kinds != 1:
            raise ValueError("gate must set exactly one of name/word/matrix")
        if self.name is not None:
            if self.name not in NAMED_GATES:
                raise ValueError(f"unknown gate name {self.name!r}")
            arity = 1 if NAMED_GATES[self.name].shape[0] == 2 else 2
            if arity != len(self.qubits):
                raise ValueError(f"{self.name} acts on {arity} wires, got {len(self.qubits)}")
        if self.word is not None:
            for step_name, locs in self.word:
                if step_name not in NAMED_GATES:
                    raise ValueError(f"unknown gate name {step_name!r} in word")
                arity = 1 if NAMED_GATES[step_name].shape[0] == 2 else 2
                if len(locs) != arity or any(not 0 <= p < len(self.qubits) for p in locs):
                    raise ValueError(f"bad word step {(step_name, locs)}")
        if self.matrix is not None:
            dim = 2 ** len(self.qubits)
            mat = np.asarray(self.matrix, dtype=complex)
            if mat.shape != (dim, dim):
                raise ValueError(f"matrix shape {mat.shape} does not fit {len(self.qubits)} wires")
            if not np.allclose(mat @ mat.conj().T, np.eye(dim), atol=1e-9):
                raise ValueError("gate matrix is not unitary")
            object.__setattr__(self, "matrix", mat)

    @property
    def is_clifford_representable(self) -> bool:
        return self.matrix is None


def _embed_local(mat: np.ndarray, locs: tuple[int, ...], arity: int) -> np.ndarray:
    """Embed an elementary acting on given local positions into the slot space."""
    if arity == 1:
        return mat
    if len(locs) == 2:
        if locs == (0, 1):
            return mat
        # reversed two-qubit orientation: conjugate by SWAP
        return _SWAP @ mat @ _SWAP
    if locs == (0,):
        return np.kron(mat, np.eye(2))
    return np.kron(np.eye(2), mat)


def gate_matrix(gate: Gate) -> np.ndarray:
    """Dense matrix of the slot, qubits[0] as the most significant bit."""
    if gate.name is not None:
        return NAMED_GATES[gate.name]
    if gate.matrix is not None:
        return gate.matrix
    arity = len(gate.qubits)
    total = np.eye(2**arity, dtype=complex)
    for step_name, locs in gate.word:
        total = _embed_local(NAMED_GATES[step_name], locs, arity) @ total
    return total


def dagger_gate(gate: Gate) -> Gate:
    if gate.name is not None:
        return Gate(qubits=gate.qubits, name=_DAGGER_NAME[gate.name])
    if gate.word is not None:
        steps = tuple((_DAGGER_NAME[name], locs) for name, locs in reversed(gate.word))
        return Gate(qubits=gate.qubits, word=steps)
    return Gate(qubits=gate.qubits, matrix=gate.matrix.conj().T)


@dataclass(frozen=True)
class LayeredCircuit:
    """Layers of disjoint gates on m wires; code_qubits marks the data wires."""

    m: int
    layers: tuple[tuple[Gate, ...], ...]
    code_qubits: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one wire")
        for t, layer in enumerate(self.layers):
            used: set[int] = set()
            for gate in layer:
                for q in gate.qubits:
                    if not 0 <= q < self.m:
                        raise ValueError(f"layer {t}: wire {q} outside [0, {self.m})")
                    if q in used:
                        raise ValueError(f"layer {t}: wire {q} used twice")
                    used.add(q)
        if self.code_qubits is not None:
            if any(not 0 <= q < self.m for q in self.code_qubits):
                raise ValueError("code_qubits outside wire range")

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def n_gates(self) -> int:
        return sum(len(layer) for layer in self.layers)

    @property
    def entangling_depth(self) -> int:
        """Layers containing at least one two-qubit gate."""
        return sum(1 for layer in self.layers if any(len(g.qubits) == 2 for g in layer))


def identity_circuit(m: int) -> LayeredCircuit:
    return LayeredCircuit(m=m, layers=())


def lightcone(circuit: LayeredCircuit, region) -> frozenset[int]:
    """Backward cone of the region through the layers (last layer first)."""
    cone = set(int(q) for q in region)
    for q in cone:
        if not 0 <= q < circuit.m:
            raise ValueError(f"region wire {q} outside [0, {circuit.m})")
    for layer in reversed(circuit.layers):
        grown = set(cone)
        for gate in layer:
            if cone.intersection(gate.qubits):
                grown.update(gate.qubits)
        cone = grown
    return frozenset(cone)


@dataclass(frozen=True)
class RestrictedCircuit:
    circuit: LayeredCircuit
    cone: frozenset[int]


def restrict_to_lightcone(circuit: LayeredCircuit, region) -> RestrictedCircuit:
    """Keep exactly the gates inside the region's causal cone.

    The restricted circuit acts on the same wires and has the same depth
    (some layers may become empty); its output marginal on the region equals
    the full circuit's.
    """
    cone = set(int(q) for q in region)
    kept_layers: list[tuple[Gate, ...]] = []
    for layer in reversed(circuit.layers):
        kept = tuple(g for g in layer if cone.intersection(g.qubits))
        for gate in kept:
            cone.update(gate.qubits)
        kept_layers.append(kept)
    kept_layers.reverse()
    restricted = LayeredCircuit(m=circuit.m, layers=tuple(kept_layers), code_qubits=circuit.code_qubits)
    return RestrictedCircuit(circuit=restricted, cone=frozenset(cone))


def reverse_circuit(circuit: LayeredCircuit) -> LayeredCircuit:
    """The adjoint circuit: reversed layers of daggered gates."""
    layers = tuple(tuple(dagger_gate(g) for g in layer) for layer in reversed(circuit.layers))
    return LayeredCircuit(m=circuit.m, layers=layers, code_qubits=circuit.code_qubits)


def compose(first: LayeredCircuit, then: LayeredCircuit) -> LayeredCircuit:
    """Circuit applying ``first`` and then ``then`` (wire counts must match)."""
    if first.m != then.m:
        raise ValueError("wire counts differ")
    code = first.code_qubits if first.code_qubits is not None else then.code_qubits
    return LayeredCircuit(m=first.m, layers=first.layers + then.layers, code_qubits=code)


def embed(circuit: LayeredCircuit, m_new: int, wire_map: dict[int, int] | None = None) -> LayeredCircuit:
    """Re-house the circuit on m_new wires, mapping wire q to wire_map[q]."""
    if wire_map is None:
        wire_map = {q: q for q in range(circuit.m)}
    layers = []
    for layer in circuit.layers:
        layers.append(
            tuple(
                Gate(
                    qubits=tuple(wire_map[q] for q in g.qubits),
                    name=g.name,
                    word=g.word,
                    matrix=g.matrix,
                )
                for g in layer
            )
        )
    code = None
    if circuit.code_qubits is not None:
        code = tuple(wire_map[q] for q in circuit.code_qubits)
    return LayeredCircuit(m=m_new, layers=tuple(layers), code_qubits=code)


_WORD_ALPHABET: tuple[WordStep, ...] = (
    ("H", (0,)),
    ("H", (1,)),
    ("S", (0,)),
    ("S", (1,)),
    ("CX", (0, 1)),
    ("CX", (1, 0)),
    ("CZ", (0, 1)),
)


def random_clifford_word(rng: np.random.Generator, length: int = 12) -> tuple[WordStep, ...]:
    """A random word over a generating set of the two-qubit Clifford group."""
    picks = rng.integers(0, len(_WORD_ALPHABET), size=length)
    return tuple(_WORD_ALPHABET[int(i)] for i in picks)


def random_low_depth(
    m: int,
    depth: int,
    family: str = "clifford",
    seed: int | None = None,
    rng: np.random.Generator | None = None,
) -> LayeredCircuit:
    """Random circuit: each layer a uniformly random maximal matching.

    family "clifford" fills slots with random Clifford words (single gate per
    slot, tableau-simulable); "haar" fills them with Haar-random dense
    two-qubit unitaries.
    """
    if family not in ("clifford", "haar"):
        raise ValueError(f"unknown family {family!r}")
    if rng is None:
        rng = np.random.default_rng(seed)
    layers = []
    for _ in range(depth):
        perm = rng.permutation(m)
        gates = []
        for i in range(0, m - 1, 2):
            pair = (int(perm[i]), int(perm[i + 1]))
            if family == "clifford":
                gates.append(Gate(qubits=pair, word=random_clifford_word(rng)))
            else:
                from scipy.stats import unitary_group

                gates.append(Gate(qubits=pair, matrix=unitary_group.rvs(4, random_state=rng)))
        layers.append(tuple(gates))
    return LayeredCircuit(m=m, layers=tuple(layers))


# --- file I/O ---


def circuit_to_dict(circuit: LayeredCircuit) -> dict:
    """File-schema payload: named gates stay named, word gates densify."""
    layers = []
    for layer in circuit.layers:
        entries = []
        for g in layer:
            if g.name is not None:
                gate_field: object = g.name
            else:
                mat = gate_matrix(g)
                gate_field = {"dense": [[[float(v.real), float(v.imag)] for v in row] for row in mat]}
            entries.append({"gate": gate_field, "qubits": list(g.qubits)})
        layers.append(entries)
    return {
        "m": circuit.m,
        "code_qubits": list(circuit.code_qubits) if circuit.code_qubits is not None else list(range(circuit.m)),
        "layers": layers,
    }


def circuit_from_dict(payload: dict) -> LayeredCircuit:
    if not isinstance(payload, dict):
        raise ValueError("circuit file must hold a JSON object")
    for key in ("m", "layers"):
        if key not in payload:
            raise ValueError(f"circuit file missing {key!r}")
    m = int(payload["m"])
    layers = []
    for t, layer in enumerate(payload["layers"]):
        gates = []
        for gi, entry in enumerate(layer):
            where = f"layer {t} gate {gi}"
            if not isinstance(entry, dict) or "gate" not in entry or "qubits" not in entry:
                raise ValueError(f"{where}: needs 'gate' and 'qubits'")
            qubits = tuple(int(q) for q in entry["qubits"])
            field = entry["gate"]
            try:
                if isinstance(field, str):
                    gates.append(Gate(qubits=qubits, name=field))
                elif isinstance(field, dict) and "dense" in field:
                    mat = np.array(
                        [[complex(cell[0], cell[1]) for cell in row] for row in field["dense"]]
                    )
                    gates.append(Gate(qubits=qubits, matrix=mat))
                elif isinstance(field, dict) and "word" in field:
                    word = tuple((str(nm), tuple(int(p) for p in locs)) for nm, locs in field["word"])
                    gates.append(Gate(qubits=qubits, word=word))
                else:
                    raise ValueError("gate must be a name or a {'dense': ...} payload")
            except ValueError as err:
                raise ValueError(f"{where}: {err}") from err
        layers.append(tuple(gates))
    code_qubits = payload.get("code_qubits")
    if code_qubits is not None:
        code_qubits = tuple(int(q) for q in code_qubits)
    return LayeredCircuit(m=m, layers=tuple(layers), code_qubits=code_qubits)


def load_circuit(path: str | Path) -> LayeredCircuit:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ValueError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from err
    try:
        return circuit_from_dict(payload)
    except ValueError as err:
        raise ValueError(f"{path}: {err}") from err


def dump_circuit(circuit: LayeredCircuit, path: str | Path) -> None:
    Path(path).write_text(json.dumps(circuit_to_dict(circuit), indent=2, sort_keys=True) + "\n")
