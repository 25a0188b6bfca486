import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from persexc.complex_core import intersect, load_subcomplex
from persexc.excision import (
    excise_barcodes,
    excise_compute,
    verify_excision_step,
    verify_persistent_excision,
    workload,
)
from persexc.gf_linalg import rank
from persexc.homology import build_module, induced_map, restricted_map
from persexc.oracle import InstanceParams, generate
from persexc.persistence import barcode, reduce
from persexc.sequences import CoverViolation

from conftest import FIXTURES

seeds = st.integers(0, 10**6)


def test_step_trivial(e1):
    assert verify_excision_step(e1, e1.whole(), e1.whole(), 2, 1)


def test_step_e3(e3):
    assert verify_excision_step(*e3, 2, 1)
    assert verify_excision_step(*e3, 1, 1)


def test_step_refuses_noncover(e1):
    with pytest.raises(CoverViolation):
        verify_excision_step(e1, e1.sub([(0,)]), e1.sub([(1,)]), 0, 0)


def test_b_equals_x(e3):
    X, A, _ = e3
    rep = verify_persistent_excision(X, A, X.whole(), (0, 1))
    assert rep.holds
    for d in rep.degrees:
        assert d.component_ranks == d.dims_xa


def test_e3_report(e3):
    rep = verify_persistent_excision(*e3, (0, 1))
    assert rep.module_iso and rep.group_iso
    table = {(r.i, r.j): (r.beta_xa, r.beta_bab, r.equal) for r in rep.degrees[1].group_table}
    assert table[(2, 2)] == (1, 1, True)
    assert table[(0, 2)] == (0, 0, True)


def test_e3_golden_betti(e3):
    rep = verify_persistent_excision(*e3, 1)
    golden = json.loads((FIXTURES / "e3" / "golden_betti.json").read_text())
    for r in rep.degrees[0].group_table:
        assert r.beta_xa == golden["beta_1_XA"][f"{r.i},{r.j}"]
        assert r.beta_bab == golden["beta_1_BAB"][f"{r.i},{r.j}"]


def test_e3_excision_squares_full_rank(e3):
    X, A, B = e3
    AB = intersect(A, B)
    for k in (0, 1):
        mx, mb = build_module(X, k, A), build_module(B, k, AB)
        comps = [induced_map(sb, sx) for sb, sx in zip(mb.spaces, mx.spaces)]
        for i in range(3):
            for j in range(i + 1, 3):
                s = restricted_map(mb.phi(i, j), comps[i], comps[j], mx.phi(i, j))
                assert s.rows == s.cols == rank(mx.phi(i, j)) == rank(s)


def test_refuses_noncover_with_offenders(e3):
    X = e3[0]
    A = load_subcomplex(FIXTURES / "e3" / "A_noncover.txt", X)
    B = load_subcomplex(FIXTURES / "e3" / "B_noncover.txt", X)
    with pytest.raises(CoverViolation) as exc:
        verify_persistent_excision(X, A, B)
    assert (2,) in exc.value.offending


def test_excise_compute_empty_a(e1):
    bc = excise_compute(e1, e1.empty(), e1.whole(), 1)
    assert bc == barcode(reduce(e1), 1)


def test_excise_compute_e3(e3):
    X, A, B = e3
    assert excise_compute(X, A, B, 1).intervals() == barcode(reduce(X, A), 1).intervals()
    sizes = workload(X, A, B)
    assert (sizes["direct"], sizes["excised"]) == (6, 5)


@given(seeds, st.sampled_from([2, 3, 5]))
def test_excision_on_random_covers(seed, p):
    X, A, B = generate(InstanceParams(seed=seed, max_vertices=8, max_dim=3, n_levels=4))
    assert verify_persistent_excision(X, A, B, (0, 1, 2), p=p).holds


@given(seeds, st.sampled_from([2, 3]))
def test_excised_barcodes_equal_direct(seed, p):
    X, A, B = generate(InstanceParams(seed=seed, max_vertices=10, max_dim=3, n_levels=5))
    R = reduce(X, A, p=p)
    assert excise_barcodes(X, A, B, 3, p=p) == [barcode(R, k) for k in range(4)]


@given(seeds)
def test_forced_gap_shrinks_workload(seed):
    X, A, B = generate(InstanceParams(seed=seed, max_vertices=10, max_dim=3, min_excised=5))
    sizes = workload(X, A, B)
    assert len(A.members - B.members) >= 5
    assert sizes["excised"] < sizes["direct"]
