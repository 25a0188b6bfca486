import pytest

from persexc.complex_core import FilteredComplex, SubcomplexSpec, check_cover, format_complex, format_subcomplex
from persexc.oracle import (
    InstanceParams,
    generate,
    load_witness,
    oracle_betti,
    save_witness,
    search_nonexact,
    shrink_witness,
)

from conftest import FIXTURES


def test_oracle_examples(e1):
    assert oracle_betti(e1, None, 1, 2, 2) == 1
    assert oracle_betti(e1, None, 0, 0, 1) == 1
    for i in range(3):
        assert oracle_betti(e1, None, 3, i, i) == 0


def test_oracle_rejects_reversed_window(e1):
    with pytest.raises(ValueError):
        oracle_betti(e1, None, 0, 2, 1)


def test_oracle_relative_e3(e3):
    X, A, _ = e3
    assert oracle_betti(X, A, 1, 2, 2) == 1
    assert oracle_betti(X, A, 1, 1, 2) == 0


def test_single_vertex():
    for seed in range(20):
        X, A, B = generate(InstanceParams(seed=seed, max_vertices=1))
        assert list(X.levels) == [(0,)]
        assert A.members == B.members == {(0,)}


def test_seed_42_golden():
    X, A, B = generate(InstanceParams(seed=42))
    header = ["generated seed=42"]
    d = FIXTURES / "gen_seed42"
    assert format_complex(X, header) == (d / "X.txt").read_text()
    assert format_subcomplex(A, "X.txt", header) == (d / "A.txt").read_text()
    assert format_subcomplex(B, "X.txt", header) == (d / "B.txt").read_text()


def test_thousand_seeds_valid():
    for seed in range(1000):
        X, A, B = generate(InstanceParams(seed=seed, max_vertices=10, max_dim=3, n_levels=5))
        FilteredComplex(X.levels, n=X.n).check()
        SubcomplexSpec(X, A.members)
        SubcomplexSpec(X, B.members)
        assert A.members | B.members == frozenset(X.levels)
        assert check_cover(X, A, B).is_cover


@pytest.mark.parametrize(
    "kw", [{"max_vertices": 0}, {"max_dim": 4}, {"n_levels": 0}, {"cover_bias": 1.5}]
)
def test_params_validated(kw):
    with pytest.raises(ValueError):
        InstanceParams(**kw)


def test_min_excised_respected():
    for seed in range(50):
        X, A, B = generate(InstanceParams(seed=seed, max_vertices=10, max_dim=3, min_excised=5))
        assert len(A.members - B.members) >= 5


def test_degenerate_sweep_finds_nothing():
    assert search_nonexact(range(200), "mv", degenerate=True) is None
    assert search_nonexact(range(200), "pair", degenerate=True) is None


def test_search_is_deterministic():
    a = search_nonexact(range(100), "pair")
    b = search_nonexact(range(100), "pair")
    assert a is not None
    assert (a.seed, a.i, a.j, a.k, a.position) == (b.seed, b.i, b.j, b.k, b.position)


def test_shrink_and_roundtrip(tmp_path):
    w = search_nonexact(range(100), "mv")
    assert w is not None
    s = shrink_witness(w)
    assert len(s.X) <= len(w.X)
    save_witness(s, tmp_path)
    back = load_witness(tmp_path)
    assert back.X == s.X and back.A.members == s.A.members and back.B.members == s.B.members
    assert (back.i, back.j, back.k, back.position, back.seed) == (s.i, s.j, s.k, s.position, s.seed)


def test_committed_witness_headers():
    for target in ("mv", "pair"):
        w = load_witness(FIXTURES / f"witness_{target}")
        assert w.target == target
        assert w.i < w.j
