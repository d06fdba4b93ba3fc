from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from gistheory.covers import (
    cover_check,
    enumerate_octatonic_covers,
    fixing_translations,
    image_set,
    translation_fixed_triples,
)
from gistheory.errors import DomainError, PreconditionError
from gistheory.pcmath import AffineMap, ti_group
from gistheory.subdual import octatonic_set, octatonic_stabilizer

O01 = octatonic_set("01")
G0 = octatonic_stabilizer("01")


def brute_simply_transitive(g0, x):
    """Orbit of x and, for every ordered pair in it, the number of joining maps."""
    x = frozenset(x)
    orbit = {frozenset(f(p) for p in x) for f in g0}
    counts = [sum(1 for f in g0 if frozenset(f(p) for p in a) == b) for a in orbit for b in orbit]
    return all(c == 1 for c in counts)


def brute_stabilizer_trivial(g0, x):
    x = frozenset(x)
    return [f for f in g0 if frozenset(f(p) for p in x) == x] == [AffineMap.identity(12)]


# octatonic corollary


@pytest.mark.parametrize("oid", ["01", "12", "23"])
def test_all_56_simply_transitive(oid):
    reports = enumerate_octatonic_covers(oid)
    assert len(reports) == 56
    assert all(r.simply_transitive for r in reports)
    assert all(r.stabilizer_size == 1 and len(r.cover) == 8 for r in reports)


def test_iff_both_directions_brute():
    for x in combinations(sorted(O01), 3):
        assert brute_simply_transitive(G0, x) == brute_stabilizer_trivial(G0, x)
        assert brute_simply_transitive(G0, x) == cover_check(O01, G0, x).simply_transitive


def test_subsets_containing_zero():
    assert sum(1 for r in enumerate_octatonic_covers("01") if 0 in r.subset_x) == 21


def test_major_triad_cover():
    rep = cover_check(O01, G0, {0, 4, 7})
    majors_minors = [{0, 4, 7}, {3, 7, 10}, {6, 10, 1}, {9, 1, 4}, {7, 3, 0}, {10, 6, 3}, {1, 9, 6}, {4, 0, 9}]
    assert set(rep.cover) == {frozenset(s) for s in majors_minors}
    assert rep.simply_transitive
    assert "unordered" in rep.note


def test_diminished_triad_despite_symmetry():
    x = {0, 3, 6}
    assert image_set(AffineMap.I(6), x) == frozenset(x)
    assert AffineMap.I(6) not in G0
    rep = cover_check(O01, G0, x)
    assert rep.simply_transitive and rep.stabilizer_in_g0 == (AffineMap.identity(12),)


def test_013_cover():
    rep = cover_check(O01, G0, {0, 1, 3})
    assert rep.simply_transitive and len(rep.cover) == 8
    assert brute_simply_transitive(G0, {0, 1, 3})


def test_augmented_triad_fails_under_translations():
    translations = [AffineMap.T(i) for i in range(12)]
    rep = cover_check(range(12), translations, {0, 4, 8})
    assert not rep.simply_transitive
    assert {f.label for f in rep.stabilizer_in_g0} == {"T0", "T4", "T8"}
    assert len(rep.cover) == 4


# translation lemma


def test_translation_fixed_triples_12():
    got = set(translation_fixed_triples(12))
    assert got == {frozenset({k, k + 4, k + 8}) for k in range(4)}
    for x in got:
        assert fixing_translations(x) == [4, 8]


def test_translation_fixed_triples_prime():
    assert translation_fixed_triples(7) == []
    assert translation_fixed_triples(9) == [frozenset({k, k + 3, k + 6}) for k in range(3)]


def test_no_fixed_triple_inside_octatonic():
    assert not [x for x in translation_fixed_triples(12) if x <= O01]


def test_small_modulus_rejected():
    with pytest.raises(DomainError):
        translation_fixed_triples(2)


# conjugate octatonics


def test_stabilizer_conjugates():
    t1 = AffineMap.T(1)
    conj = {t1 * f * t1.inverse() for f in G0}
    assert conj == set(octatonic_stabilizer("12"))


def test_covers_transport_by_t1():
    t1 = AffineMap.T(1)
    for r01, r12 in zip(enumerate_octatonic_covers("01"), enumerate_octatonic_covers("12")):
        assert image_set(t1, r01.subset_x) == r12.subset_x
        assert {image_set(t1, c) for c in r01.cover} == set(r12.cover)


# preconditions


def test_preconditions():
    with pytest.raises(PreconditionError):
        cover_check(O01, G0, {0, 1, 2})
    with pytest.raises(DomainError):
        cover_check(O01, G0, {0, 1})
    with pytest.raises(PreconditionError):
        cover_check(O01, [AffineMap.identity(12), AffineMap.T(1)], {0, 1, 3})
    with pytest.raises(PreconditionError):
        # preserves O01 but not transitive on it
        cover_check(O01, [AffineMap.identity(12), AffineMap.T(6), AffineMap.T(3), AffineMap.T(9)], {0, 1, 3})


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 11), min_size=3, max_size=3))
def test_random_translation_covers(x):
    g0 = [AffineMap.T(i) for i in range(12)]
    rep = cover_check(range(12), g0, x)
    assert rep.simply_transitive == (not fixing_translations(x))
    assert rep.simply_transitive == brute_simply_transitive(g0, x)


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(0, 11), min_size=3, max_size=3))
def test_random_ti_covers(x):
    g0 = list(ti_group(12))
    rep = cover_check(range(12), g0, x)
    assert rep.simply_transitive == brute_stabilizer_trivial(g0, x) == brute_simply_transitive(g0, x)
