from math import inf

import pytest
from hypothesis import given
from hypothesis import strategies as st

from persexc.complex_core import parse_complex
from persexc.homology import build_module
from persexc.oracle import InstanceParams, generate
from persexc.persistence import Barcode, barcode, barcodes, betti_from_barcode, reduce

from conftest import FIXTURES

seeds = st.integers(0, 10**6)


def test_reduce_empty():
    R = reduce(parse_complex(""))
    assert R.size == 0 and not R.pivots


def test_reduce_single_vertex():
    R = reduce(parse_complex("0 0\n"))
    assert R.size == 1 and R.columns == ((),)


def test_e1_pairs_two_edges(e1):
    R = reduce(e1)
    paired = [s for j, s in enumerate(R.order) if len(s) == 2 and R.columns[j]]
    assert len(paired) == 2


def test_e1_barcodes(e1):
    R = reduce(e1)
    assert barcode(R, 1).intervals() == [(2, inf)]
    assert sorted(barcode(R, 0).intervals()) == [(0, 1), (0, 1), (0, inf)]


def test_e3_relative_golden(e3):
    X, A, _ = e3
    golden = Barcode.from_text((FIXTURES / "e3" / "golden_barcode_rel_k1.txt").read_text())
    assert barcode(reduce(X, A), 1) == golden


def test_betti_from_barcode_examples(e1):
    forever = Barcode.from_intervals(0, [(0, inf)])
    assert all(betti_from_barcode(forever, i, j) == 1 for i in range(4) for j in range(i, 4))
    assert betti_from_barcode(Barcode.from_intervals(0, [(0, 1)]), 0, 1) == 0
    assert betti_from_barcode(barcode(reduce(e1), 0), 0, 0) == 3
    with pytest.raises(ValueError):
        betti_from_barcode(forever, 1, 0)


def test_text_roundtrip():
    bc = Barcode.from_intervals(1, [(0, 2), (0, 2), (1, inf)])
    assert bc.to_text() == "degree 1\n0 2 2\n1 inf 1\n"
    assert Barcode.from_text(bc.to_text()) == bc
    assert bc.to_dict()["bars"][-1]["death"] is None


def test_equal_level_pairs_dropped():
    X = parse_complex("0 0\n0 1\n0 0 1\n")
    assert barcode(reduce(X), 0).intervals() == [(0, inf)]


def _instance(seed):
    return generate(InstanceParams(seed=seed, max_vertices=9, max_dim=3, n_levels=5))


@given(seeds, st.sampled_from([2, 3, 5]))
def test_barcode_dims_match_stage_homology(seed, p):
    X, A, _ = _instance(seed)
    for rel in (None, A):
        bcs = barcodes(X, rel, max_dim=3, p=p)
        for k in range(4):
            dims = build_module(X, k, rel, p=p).dims
            assert tuple(bcs[k].alive_at(i) for i in range(X.n + 1)) == dims


@given(seeds, st.sampled_from([2, 3, 5]))
def test_clearing_is_transparent(seed, p):
    X, A, _ = _instance(seed)
    for rel in (None, A):
        plain = reduce(X, rel, p=p)
        fast = reduce(X, rel, p=p, clearing=True)
        assert [barcode(plain, k) for k in range(4)] == [barcode(fast, k) for k in range(4)]
