import pytest
from hypothesis import given, settings, strategies as st

from forestpat import kernels
from forestpat._pykernels import count_forests as py_count
from forestpat.enumeration import FORESTS, TREES, count_avoiding, enumerate_forests, enumerate_stats
from forestpat.errors import CapExceededError
from forestpat.forest import avoids
from forestpat.patterns import CONSECUTIVE, PatternSet

from oracles import avoiding

SETS = ["empty", "21", "12", "213", "123", "132", "123,213", "132,231,321", "1234", "2143,312"]


@pytest.mark.parametrize("text", SETS)
@pytest.mark.parametrize("kind", ["classical", CONSECUTIVE])
def test_enumeration_matches_exhaustive_filter(text, kind):
    s = PatternSet.parse(text, kind)
    for n in range(6):
        want = sorted(avoiding(n, s.tuples(), kind == CONSECUTIVE))
        got = [f.parent for f in enumerate_forests(n, s)]
        assert got == want, (text, kind, n)  # lexicographic, each exactly once
        assert count_avoiding(n, s, TREES) == sum(1 for p in want if p.count(0) == 1)


def test_enumerated_forests_avoid():
    s = PatternSet.parse("213")
    assert all(avoids(f, s) for f in enumerate_forests(5, s))


def test_cap():
    with pytest.raises(CapExceededError):
        count_avoiding(11, PatternSet.parse("213"))
    with pytest.raises(CapExceededError):
        count_avoiding(5, PatternSet.parse("213"), cap=4)


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("FORESTPAT_CAP", "3")
    with pytest.raises(CapExceededError):
        count_avoiding(4, PatternSet.parse("21"))


def test_sharded_equals_serial():
    s = PatternSet.parse("213")
    serial = enumerate_stats(7, s, want_stats=True)
    sharded = enumerate_stats(7, s, want_stats=True, workers=3, shard_depth=2)
    assert serial == sharded


@pytest.mark.parametrize("text,mode,want", [
    # independent memoized counts, frozen
    ("213", FORESTS, [1, 1, 3, 15, 104, 917, 9783, 122266, 1749900]),
    ("213", TREES, [0, 1, 2, 8, 47, 361, 3411, 38188, 493802]),
    ("123", FORESTS, [1, 1, 3, 15, 104, 918, 9823, 123417, 1780020]),
    ("123", TREES, [0, 1, 2, 8, 47, 362, 3445, 39038, 513426]),
    ("132,231,321", FORESTS, [1, 1, 3, 13, 73, 501, 4051, 37633, 394353]),
])
def test_frozen_counts(text, mode, want):
    s = PatternSet.parse(text)
    assert [count_avoiding(n, s, mode) for n in range(len(want))] == want


def test_consecutive_frozen():
    s = PatternSet.parse("213", CONSECUTIVE)
    assert [count_avoiding(n, s) for n in range(7)] == [1, 1, 3, 15, 106, 973, 11018]


@pytest.mark.parametrize("a,b", [("123", "132"), ("123,213", "132,213")])
def test_wilf_equivalent_pairs(a, b):
    # equal counts expected; checked only at brute-force scale
    for mode in (FORESTS, TREES):
        for n in range(8):
            assert count_avoiding(n, PatternSet.parse(a), mode) == count_avoiding(n, PatternSet.parse(b), mode)


@given(st.lists(st.integers(2, 4).flatmap(lambda k: st.permutations(list(range(1, k + 1)))), max_size=3),
       st.booleans(), st.integers(0, 6))
@settings(max_examples=60, deadline=None)
def test_complement_symmetry(pats, consecutive, n):
    kind = CONSECUTIVE if consecutive else "classical"
    s = PatternSet([tuple(p) for p in pats], kind)
    assert count_avoiding(n, s) == count_avoiding(n, s.complement())


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled extension not built")
@given(st.lists(st.integers(2, 4).flatmap(lambda k: st.permutations(list(range(1, k + 1)))), max_size=3),
       st.booleans(), st.booleans(), st.integers(0, 6), st.integers(0, 4), st.integers(-1, 3))
@settings(max_examples=80, deadline=None)
def test_kernel_parity(pats, consecutive, trees, n, depth, rule):
    c = kernels.backend("compiled")
    args = (n, [tuple(p) for p in pats], consecutive, trees, (), depth, rule, True)
    assert c.count_forests(*args) == py_count(*args)


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled extension not built")
def test_kernel_parity_with_prefix():
    c = kernels.backend("compiled")
    pats = [(2, 1, 3)]
    for pre in [(0,), (2,), (0, 1), (3, 0)]:
        args = (6, pats, False, False, pre, 0, -1, True)
        assert c.count_forests(*args) == py_count(*args)


@given(st.integers(2, 7), st.integers(0, 3))
@settings(max_examples=20, deadline=None)
def test_stats_consistency(n, which):
    s = PatternSet.parse(["213", "21", "empty", "123,231"][which])
    st_ = enumerate_stats(n, s, want_stats=True)
    assert sum(st_.components) == st_.total
    assert sum(k * c for k, c in enumerate(st_.size_counts)) == n * st_.total
    assert sum(st_.root_labels) == sum(c * m for c, m in enumerate(st_.components))
    assert sum(st_.depths) == st_.total
