"""Code constructions against rank/enumeration oracles and file round-trips."""

from __future__ import annotations

import json

import numpy as np
import pytest

from stablab import codes
from stablab.codes import (
    BUILTIN_CODES,
    CssCode,
    build_code,
    code_from_dict,
    code_parameters,
    code_to_dict,
    css_to_stabilizer,
    dump_code,
    hypergraph_product,
    load_code,
    punctured_toric_code,
    repetition_check_matrix,
    surface_code,
    toric_code,
)
from stablab.paulis import logical_pairs, min_weight_logical

from oracles import gf2_rank_naive

# frozen from the rank + weight-ascending enumeration oracles (see ledger)
EXPECTED_PARAMETERS = {
    "five_qubit": dict(n=5, checks=4, rank=4, k=1, d=3, locality=4),
    "toric2": dict(n=8, checks=8, rank=6, k=2, d=2, locality=4),
    "toric3": dict(n=18, checks=18, rank=16, k=2, d=3, locality=4),
    "surface5": dict(n=5, checks=4, rank=4, k=1, d=2, locality=4),
    "surface13": dict(n=13, checks=12, rank=12, k=1, d=3, locality=4),
}


def naive_rank_of_group(group) -> int:
    rows = []
    for p in group.generators:
        rows.append([(p.x >> q) & 1 for q in range(group.n)] + [(p.z >> q) & 1 for q in range(group.n)])
    return gf2_rank_naive(rows)


@pytest.mark.parametrize("name", sorted(BUILTIN_CODES))
def test_builtin_parameters(name):
    code = build_code(name)
    expected = EXPECTED_PARAMETERS[name]
    params = code_parameters(code, distance_cap=4)
    assert code.n == expected["n"]
    assert code.n_checks == expected["checks"]
    assert code.group.rank == expected["rank"] == naive_rank_of_group(code.group)
    assert params.k == expected["k"]
    assert params.d == expected["d"]
    assert params.locality == expected["locality"]
    # locality really bounds both check weight and qubit degree
    degree = [0] * code.n
    for g in code.group.generators:
        assert g.weight <= params.locality
        for q in g.support:
            degree[q] += 1
    assert max(degree) <= params.locality
    # checks-per-qubit and qubits-per-check ratios stay within locality
    assert code.n_checks <= params.locality * code.n
    assert code.n <= params.locality * code.n_checks


def test_toric_keeps_dependent_checks():
    code = toric_code(2)
    assert code.n_checks == 8 and code.group.rank == 6
    # the two dependencies are the full star and plaquette products
    stars = code.css.hx
    assert len(stars) == 4
    counts = np.zeros(8, dtype=int)
    for row in stars:
        for col in row:
            counts[col] += 1
    assert (counts == 2).all()  # every edge sits in exactly two stars


def test_toric3_logical_pair_weights():
    code = toric_code(3)
    pairs = logical_pairs(code.group)
    assert len(pairs) == 2
    for pair in pairs:
        assert pair.xbar.weight == 3 and pair.zbar.weight == 3


def test_css_orthogonality_enforced():
    with pytest.raises(ValueError, match="odd set"):
        CssCode(n=3, hx=((0, 1),), hz=((1, 2),))
    with pytest.raises(ValueError, match="outside"):
        CssCode(n=2, hx=((0, 5),), hz=())
    with pytest.raises(ValueError, match="repeats"):
        CssCode(n=3, hx=((0, 0),), hz=())


def test_css_to_stabilizer_letters():
    css = CssCode(n=3, hx=((0, 1),), hz=((0, 1, 2),))
    group = css_to_stabilizer(css)
    assert [str(g) for g in group.generators] == ["XXI", "ZZZ"]


def test_hypergraph_product_shapes_and_orthogonality():
    rng = np.random.default_rng(23)
    for _ in range(20):
        m1, n1 = int(rng.integers(1, 4)), int(rng.integers(2, 5))
        m2, n2 = int(rng.integers(1, 4)), int(rng.integers(2, 5))
        h1 = rng.integers(0, 2, size=(m1, n1))
        h2 = rng.integers(0, 2, size=(m2, n2))
        code = hypergraph_product(h1, h2)
        assert code.n == n1 * n2 + m1 * m2
        assert len(code.css.hx) == m1 * n2
        assert len(code.css.hz) == n1 * m2
        # CssCode validation already enforces orthogonality; double-check densely
        prod = (code.css.dense_hx() @ code.css.dense_hz().T) % 2
        assert not prod.any()


def test_surface_codes_from_repetition_product():
    # n = L^2 + (L-1)^2, k = 1, d = L for the open-boundary family
    for length, expected_n in ((2, 5), (3, 13)):
        code = surface_code(length)
        params = code_parameters(code)
        assert params.n == expected_n
        assert params.k == 1
        assert params.d == length


def test_hypergraph_product_periodic_reproduces_toric_parameters():
    for length in (2, 3):
        h = repetition_check_matrix(length, periodic=True)
        product = hypergraph_product(h, h)
        toric = toric_code(length)
        p1 = code_parameters(product)
        p2 = code_parameters(toric)
        assert (p1.n, p1.k, p1.d) == (p2.n, p2.k, p2.d)


def test_punctured_toric_k_growth():
    # frozen from the rank oracle: the retained plaquette dependency absorbs
    # the first removal, afterwards k grows by one per puncture
    puncture_sets = [[], [(0, 0)], [(0, 0), (1, 1)], [(0, 0), (1, 1), (2, 0)]]
    expected_k = [2, 2, 3, 4]
    for punctures, k in zip(puncture_sets, expected_k):
        code = punctured_toric_code(3, punctures)
        assert code.group.n_logical == k
        assert code.n == 18  # qubits never removed
        assert code.n_checks == 18 - len(punctures)
    with pytest.raises(ValueError, match="duplicate"):
        punctured_toric_code(3, [(0, 0), (3, 3)])  # same coordinate mod L


def test_build_code_unknown_name():
    with pytest.raises(KeyError, match="five_qubit"):
        build_code("steane")


def test_code_json_round_trip(tmp_path):
    for name in ("five_qubit", "toric2"):
        code = build_code(name)
        path = tmp_path / f"{name}.json"
        dump_code(code, path)
        loaded = load_code(path)
        assert [str(g) for g in loaded.group.generators] == [str(g) for g in code.group.generators]
        # byte-stable: dumping again produces identical bytes
        first = path.read_bytes()
        dump_code(loaded, path)
        assert path.read_bytes() == first


def test_code_file_checks_form():
    payload = {"n": 5, "checks": ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]}
    code = code_from_dict(payload)
    assert code.group.rank == 4


def test_code_file_css_form_infers_n():
    payload = {"css": {"hx": [[0, 1]], "hz": [[0, 1, 2]]}}
    code = code_from_dict(payload)
    assert code.n == 3


def test_code_file_errors_are_precise(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 5,\n  "checks": [}')
    with pytest.raises(ValueError, match=r"bad\.json:2:\d+"):
        load_code(bad)
    empty = tmp_path / "empty.json"
    empty.write_text("{}")
    with pytest.raises(ValueError, match="checks.*css|css|checks"):
        load_code(empty)
    wrong = tmp_path / "wrong.json"
    wrong.write_text('{"checks": []}')
    with pytest.raises(ValueError, match="non-empty"):
        load_code(wrong)
